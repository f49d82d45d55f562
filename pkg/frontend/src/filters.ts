/** Filter candidates and client-side validation.
 *
 * The six canonical candidates mirror the service sweep; validation
 * only pre-checks what the service would reject with a 422 so errors
 * can surface inline without a round trip.
 */

export interface FilterChoice {
  variant: string;
  value: number | null;
  label: string;
}

export const CANONICAL_FILTERS: readonly FilterChoice[] = [
  { variant: "frequency", value: 2, label: "frequency_2" },
  { variant: "frequency", value: 10, label: "frequency_10" },
  { variant: "frequency_above_average", value: null, label: "frequency_above_average" },
  { variant: "temporal", value: 60, label: "temporal_60" },
  { variant: "temporal", value: 120, label: "temporal_120" },
  { variant: "temporal", value: 300, label: "temporal_300" },
];

export const VARIANTS = ["none", "frequency", "frequency_above_average", "temporal"] as const;

export function filterLabel(variant: string, value: number | null): string {
  return value === null ? variant : `${variant}_${value}`;
}

/** Returns a human-readable problem, or null when the choice is valid. */
export function validateFilter(variant: string, value: number | null): string | null {
  if (!(VARIANTS as readonly string[]).includes(variant)) {
    return `unknown filter variant: ${variant}`;
  }
  if (variant === "frequency") {
    if (value === null || !Number.isInteger(value) || value < 2) {
      return "frequency needs an integer threshold of at least 2";
    }
    return null;
  }
  if (variant === "temporal") {
    if (value === null || !Number.isInteger(value) || value < 1) {
      return "temporal needs a positive integer window in seconds";
    }
    return null;
  }
  if (value !== null) {
    return `${variant} does not take a value`;
  }
  return null;
}
