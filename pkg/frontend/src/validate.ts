// Inline form validation; a non-null message means "do not send a request".

export function validateTarget(tau: number, gammas: number[]): string | null {
  if (!Number.isFinite(tau) || tau <= 0) {
    return "tau must be a positive number";
  }
  if (gammas.length === 0) {
    return "give at least one stability index";
  }
  for (const g of gammas) {
    if (!Number.isFinite(g) || g <= 0) {
      return "stability indices must be positive numbers";
    }
  }
  return null;
}

export function parseNumberList(text: string): number[] | null {
  const parts = text
    .split(/[,\s]+/)
    .map((p) => p.trim())
    .filter((p) => p.length > 0);
  if (parts.length === 0) {
    return [];
  }
  const values = parts.map(Number);
  return values.some((v) => Number.isNaN(v)) ? null : values;
}
