import type { DiagramDataset } from "./types.js";

// Coefficient diagram: index on the horizontal axis DESCENDING left-to-right
// (high order on the left, the conventional reading direction), log10
// magnitude on the vertical axis.  Negative coefficients get hollow markers;
// zero coefficients have no magnitude and are skipped with a footnote count.

export interface DiagramMarker {
  curve: string;
  index: number;
  x: number;
  y: number;
  hollow: boolean;
}

export interface DiagramCurve {
  name: string;
  color: string;
  path: { x: number; y: number }[];
}

export interface AxisTick {
  pos: number;
  label: string;
}

export interface DiagramModel {
  width: number;
  height: number;
  markers: DiagramMarker[];
  curves: DiagramCurve[];
  legend: { name: string; color: string }[];
  skippedZeros: number;
  xTicks: AxisTick[];
  yTicks: AxisTick[];
}

const PALETTE = ["#2563eb", "#dc2626", "#059669", "#d97706", "#7c3aed", "#0891b2", "#be185d", "#4d7c0f"];
const PAD = { left: 44, right: 12, top: 12, bottom: 26 };

export function curveColor(position: number): string {
  return PALETTE[position % PALETTE.length];
}

export function diagramModel(dataset: DiagramDataset, width = 420, height = 260): DiagramModel {
  const names = Object.keys(dataset);
  const innerW = width - PAD.left - PAD.right;
  const innerH = height - PAD.top - PAD.bottom;

  let maxIndex = 0;
  let magMin = Number.POSITIVE_INFINITY;
  let magMax = Number.NEGATIVE_INFINITY;
  let skippedZeros = 0;
  for (const name of names) {
    for (const pt of dataset[name]) {
      maxIndex = Math.max(maxIndex, pt.i);
      if (pt.log10_magnitude === null) {
        skippedZeros += 1;
      } else {
        magMin = Math.min(magMin, pt.log10_magnitude);
        magMax = Math.max(magMax, pt.log10_magnitude);
      }
    }
  }
  if (!Number.isFinite(magMin)) {
    magMin = 0;
    magMax = 1;
  }
  if (magMax - magMin < 1e-9) {
    magMin -= 0.5;
    magMax += 0.5;
  }

  // descending index left-to-right: i = maxIndex at x = left edge
  const xOf = (i: number): number =>
    PAD.left + (maxIndex === 0 ? innerW / 2 : ((maxIndex - i) / maxIndex) * innerW);
  const yOf = (m: number): number => PAD.top + ((magMax - m) / (magMax - magMin)) * innerH;

  const markers: DiagramMarker[] = [];
  const curves: DiagramCurve[] = [];
  const legend: { name: string; color: string }[] = [];
  names.forEach((name, position) => {
    const color = curveColor(position);
    legend.push({ name, color });
    const path: { x: number; y: number }[] = [];
    for (const pt of dataset[name]) {
      if (pt.log10_magnitude === null) {
        continue; // zero coefficient: no point on a log axis
      }
      const x = xOf(pt.i);
      const y = yOf(pt.log10_magnitude);
      markers.push({ curve: name, index: pt.i, x, y, hollow: pt.sign === "-" });
      path.push({ x, y });
    }
    curves.push({ name, color, path });
  });

  const xTicks: AxisTick[] = [];
  for (let i = 0; i <= maxIndex; i++) {
    xTicks.push({ pos: xOf(i), label: String(i) });
  }
  const yTicks: AxisTick[] = [];
  const span = magMax - magMin;
  const stepSize = span > 6 ? 2 : span > 3 ? 1 : 0.5;
  for (let m = Math.ceil(magMin / stepSize) * stepSize; m <= magMax + 1e-9; m += stepSize) {
    yTicks.push({ pos: yOf(m), label: m.toFixed(stepSize < 1 ? 1 : 0) });
  }
  return { width, height, markers, curves, legend, skippedZeros, xTicks, yTicks };
}

export function renderDiagram(model: DiagramModel): string {
  const parts: string[] = [];
  parts.push(
    `<svg viewBox="0 0 ${model.width} ${model.height}" xmlns="http://www.w3.org/2000/svg">`,
  );
  for (const tick of model.yTicks) {
    parts.push(
      `<line x1="${PAD.left}" y1="${tick.pos.toFixed(1)}" x2="${model.width - PAD.right}" ` +
        `y2="${tick.pos.toFixed(1)}" class="grid"/>`,
      `<text x="${PAD.left - 6}" y="${(tick.pos + 3).toFixed(1)}" class="tick" text-anchor="end">${tick.label}</text>`,
    );
  }
  for (const tick of model.xTicks) {
    parts.push(
      `<text x="${tick.pos.toFixed(1)}" y="${model.height - 8}" class="tick" text-anchor="middle">${tick.label}</text>`,
    );
  }
  const colorOf = new Map(model.legend.map((entry) => [entry.name, entry.color]));
  for (const curve of model.curves) {
    if (curve.path.length > 1) {
      const points = curve.path.map((p) => `${p.x.toFixed(1)},${p.y.toFixed(1)}`).join(" ");
      parts.push(`<polyline points="${points}" fill="none" stroke="${curve.color}" stroke-width="1.5"/>`);
    }
  }
  for (const marker of model.markers) {
    const color = colorOf.get(marker.curve) ?? "#000";
    const fill = marker.hollow ? "white" : color;
    parts.push(
      `<circle cx="${marker.x.toFixed(1)}" cy="${marker.y.toFixed(1)}" r="4" ` +
        `fill="${fill}" stroke="${color}" stroke-width="1.5" data-curve="${marker.curve}" data-i="${marker.index}"/>`,
    );
  }
  model.legend.forEach((entry, row) => {
    const y = PAD.top + 12 + row * 14;
    const x = model.width - PAD.right - 120;
    parts.push(
      `<circle cx="${x}" cy="${y - 3}" r="4" fill="${entry.color}"/>`,
      `<text x="${x + 8}" y="${y}" class="tick">${entry.name}</text>`,
    );
  });
  if (model.skippedZeros > 0) {
    parts.push(
      `<text x="${PAD.left}" y="${model.height - 8}" class="footnote">` +
        `${model.skippedZeros} zero coefficient${model.skippedZeros === 1 ? "" : "s"} omitted</text>`,
    );
  }
  parts.push("</svg>");
  return parts.join("");
}
