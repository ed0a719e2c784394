import { curveColor } from "./diagram.js";
import type { SimulateReport } from "./types.js";

// Time-response chart over the downsampled simulation series.

export interface ResponseModel {
  width: number;
  height: number;
  series: { name: string; color: string; points: string }[];
  zeroY: number | null;
  tMax: number;
  yRange: [number, number];
}

const PAD = { left: 44, right: 10, top: 10, bottom: 22 };

export function responseModel(
  report: SimulateReport,
  channelNames: string[],
  width = 560,
  height = 260,
): ResponseModel {
  const names = channelNames.filter((name) => name in report.channels);
  let yMin = Number.POSITIVE_INFINITY;
  let yMax = Number.NEGATIVE_INFINITY;
  for (const name of names) {
    for (const v of report.channels[name]) {
      yMin = Math.min(yMin, v);
      yMax = Math.max(yMax, v);
    }
  }
  if (!Number.isFinite(yMin)) {
    yMin = -1;
    yMax = 1;
  }
  if (yMax - yMin < 1e-12) {
    yMin -= 0.5;
    yMax += 0.5;
  }
  const tMax = report.t.length > 0 ? report.t[report.t.length - 1] : 1;
  const xOf = (t: number): number => PAD.left + (t / tMax) * (width - PAD.left - PAD.right);
  const yOf = (v: number): number =>
    PAD.top + ((yMax - v) / (yMax - yMin)) * (height - PAD.top - PAD.bottom);

  const series = names.map((name, position) => ({
    name,
    color: curveColor(position),
    points: report.t.map((t, k) => `${xOf(t).toFixed(1)},${yOf(report.channels[name][k]).toFixed(1)}`).join(" "),
  }));
  const zeroY = yMin <= 0 && yMax >= 0 ? yOf(0) : null;
  return { width, height, series, zeroY, tMax, yRange: [yMin, yMax] };
}

export function renderResponse(model: ResponseModel): string {
  const parts: string[] = [];
  parts.push(`<svg viewBox="0 0 ${model.width} ${model.height}" xmlns="http://www.w3.org/2000/svg">`);
  if (model.zeroY !== null) {
    parts.push(
      `<line x1="${PAD.left}" y1="${model.zeroY.toFixed(1)}" x2="${model.width - PAD.right}" ` +
        `y2="${model.zeroY.toFixed(1)}" class="axis"/>`,
    );
  }
  parts.push(
    `<text x="${PAD.left}" y="${model.height - 6}" class="tick">0</text>`,
    `<text x="${model.width - PAD.right}" y="${model.height - 6}" class="tick" text-anchor="end">${model.tMax.toFixed(0)} s</text>`,
    `<text x="4" y="${PAD.top + 8}" class="tick">${model.yRange[1].toPrecision(3)}</text>`,
    `<text x="4" y="${model.height - PAD.bottom}" class="tick">${model.yRange[0].toPrecision(3)}</text>`,
  );
  model.series.forEach((s, row) => {
    parts.push(`<polyline points="${s.points}" fill="none" stroke="${s.color}" stroke-width="1.5"/>`);
    const x = model.width - PAD.right - 90;
    const y = PAD.top + 12 + row * 14;
    parts.push(
      `<circle cx="${x}" cy="${y - 3}" r="4" fill="${s.color}"/>`,
      `<text x="${x + 8}" y="${y}" class="tick">${s.name}</text>`,
    );
  });
  parts.push("</svg>");
  return parts.join("");
}
