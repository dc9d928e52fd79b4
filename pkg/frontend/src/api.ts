import type {
  CauseEffectPayload,
  ConfigsPayload,
  InfluencingOptionsPayload,
  OptionHotspotsPayload,
  OptionInfo,
  ProfileDiffPayload,
  SourcePayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function unwrap<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let message = response.statusText;
    try {
      const body = await response.json();
      if (body && typeof body.error === "string") {
        message = body.error;
      }
    } catch {
      // fall back to the status text
    }
    throw new ApiError(response.status, message);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(private baseUrl: string = "") {}

  private get<T>(path: string): Promise<T> {
    return fetch(this.baseUrl + path).then((r) => unwrap<T>(r));
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return fetch(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    }).then((r) => unwrap<T>(r));
  }

  options(): Promise<OptionInfo[]> {
    return this.get("/api/options");
  }

  configs(): Promise<ConfigsPayload> {
    return this.get("/api/configs");
  }

  influencingOptions(from: string, to: string): Promise<InfluencingOptionsPayload> {
    return this.post("/api/influencing-options", { from, to });
  }

  optionHotspots(from: string, to: string, minDelta = 0): Promise<OptionHotspotsPayload> {
    return this.post("/api/option-hotspots", { from, to, min_delta: minDelta });
  }

  profileDiff(from: string, to: string): Promise<ProfileDiffPayload> {
    return this.post("/api/profile-diff", { from, to });
  }

  causeEffect(from: string, to: string): Promise<CauseEffectPayload> {
    return this.post("/api/cause-effect", { from, to });
  }

  source(file: string, chopId: string): Promise<SourcePayload> {
    const params = new URLSearchParams({ file, chop_id: chopId });
    return this.get(`/api/source?${params}`);
  }
}
