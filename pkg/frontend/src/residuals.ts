import type { SolveReport } from "./types.js";

// Residual bars: per-coefficient mismatch of the solved closed loop against
// the requested target, on a symmetric log-ish scale.

export interface ResidualModel {
  width: number;
  height: number;
  bars: { x: number; y: number; w: number; h: number; index: number; value: number }[];
  zeroY: number;
  peak: number;
}

const PAD = { left: 10, right: 10, top: 8, bottom: 18 };

export function residualModel(report: SolveReport, width = 300, height = 140): ResidualModel {
  const values = report.residuals;
  const peak = Math.max(1e-12, ...values.map((v) => Math.abs(v)));
  const innerW = width - PAD.left - PAD.right;
  const innerH = height - PAD.top - PAD.bottom;
  const zeroY = PAD.top + innerH / 2;
  const slot = innerW / Math.max(1, values.length);
  const barW = Math.max(4, slot * 0.6);
  const bars = values.map((value, index) => {
    const scaled = (value / peak) * (innerH / 2);
    return {
      x: PAD.left + index * slot + (slot - barW) / 2,
      y: scaled >= 0 ? zeroY - scaled : zeroY,
      w: barW,
      h: Math.abs(scaled),
      index,
      value,
    };
  });
  return { width, height, bars, zeroY, peak };
}

export function renderResiduals(model: ResidualModel): string {
  const parts: string[] = [];
  parts.push(`<svg viewBox="0 0 ${model.width} ${model.height}" xmlns="http://www.w3.org/2000/svg">`);
  parts.push(
    `<line x1="${PAD.left}" y1="${model.zeroY}" x2="${model.width - PAD.right}" y2="${model.zeroY}" class="axis"/>`,
  );
  for (const bar of model.bars) {
    parts.push(
      `<rect x="${bar.x.toFixed(1)}" y="${bar.y.toFixed(1)}" width="${bar.w.toFixed(1)}" ` +
        `height="${Math.max(0.5, bar.h).toFixed(1)}" class="bar" data-i="${bar.index}">` +
        `<title>s^${bar.index}: ${bar.value.toExponential(3)}</title></rect>`,
    );
    parts.push(
      `<text x="${(bar.x + bar.w / 2).toFixed(1)}" y="${model.height - 4}" class="tick" text-anchor="middle">${bar.index}</text>`,
    );
  }
  parts.push(
    `<text x="${model.width - PAD.right}" y="${PAD.top + 4}" class="footnote" text-anchor="end">peak ${model.peak.toExponential(2)}</text>`,
  );
  parts.push("</svg>");
  return parts.join("");
}
