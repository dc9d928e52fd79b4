import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

const here = dirname(fileURLToPath(import.meta.url));

/** Raw recorded API response bytes plus the parsed object; tests compare
 *  rendered numbers against the raw text to prove byte-level fidelity. */
export function loadFixture<T>(name: string): { raw: string; data: T } {
  const raw = readFileSync(join(here, "fixtures", `${name}.json`), "utf-8");
  return { raw, data: JSON.parse(raw) as T };
}

/** Every element matching `selector` must show a numeric string that occurs
 *  verbatim in the raw payload bytes. */
export function assertNumbersComeFromPayload(
  root: HTMLElement,
  selector: string,
  raw: string,
): number {
  const cells = root.querySelectorAll(selector);
  let checked = 0;
  for (const cell of cells) {
    const text = cell.textContent ?? "";
    if (!raw.includes(text)) {
      throw new Error(`rendered value ${JSON.stringify(text)} not a byte-` +
        `exact payload field`);
    }
    checked += 1;
  }
  return checked;
}
