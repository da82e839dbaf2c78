/** Horizontal-bar plot of per-user risk scores, highest first. */

const WIDTH = 420;
const BAR_HEIGHT = 18;
const GAP = 6;
const LABEL_WIDTH = 120;

const SVG_NS = "http://www.w3.org/2000/svg";

export function renderRiskChart(
  container: HTMLElement,
  plotPoints: ReadonlyArray<readonly [string, number]>,
): SVGSVGElement {
  const points = [...plotPoints].sort((a, b) => b[1] - a[1] || a[0].localeCompare(b[0]));
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("class", "risk-chart");
  svg.setAttribute("width", String(WIDTH));
  svg.setAttribute("height", String(Math.max(points.length * (BAR_HEIGHT + GAP), BAR_HEIGHT)));

  points.forEach(([user, risk], i) => {
    const y = i * (BAR_HEIGHT + GAP);
    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", "0");
    label.setAttribute("y", String(y + BAR_HEIGHT - 5));
    label.setAttribute("class", "risk-chart-label");
    label.textContent = user;
    svg.appendChild(label);

    const bar = document.createElementNS(SVG_NS, "rect");
    const width = Math.max(1, Math.round((WIDTH - LABEL_WIDTH - 60) * Math.min(1, Math.max(0, risk))));
    bar.setAttribute("x", String(LABEL_WIDTH));
    bar.setAttribute("y", String(y));
    bar.setAttribute("height", String(BAR_HEIGHT));
    bar.setAttribute("width", String(width));
    bar.setAttribute("class", "risk-chart-bar");
    bar.dataset.user = user;
    bar.dataset.risk = String(risk);
    svg.appendChild(bar);

    const value = document.createElementNS(SVG_NS, "text");
    value.setAttribute("x", String(LABEL_WIDTH + width + 6));
    value.setAttribute("y", String(y + BAR_HEIGHT - 5));
    value.setAttribute("class", "risk-chart-value");
    value.textContent = risk.toFixed(3);
    svg.appendChild(value);
  });

  container.appendChild(svg);
  return svg;
}
