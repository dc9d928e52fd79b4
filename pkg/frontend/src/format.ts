// The API serializes every seconds value with nine decimal places. Rendering
// with the same width keeps displayed numbers byte-identical to the payload
// field, which the snapshot tests verify.

export function seconds(value: number): string {
  return value.toFixed(9);
}

export function optionValue(value: boolean | string): string {
  if (typeof value === "boolean") {
    return value ? "true" : "false";
  }
  return value;
}
