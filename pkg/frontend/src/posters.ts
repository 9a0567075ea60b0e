/** Poster resolution with a generated placeholder fallback. */

const PLACEHOLDER_PALETTE = [
  "#4b3b99",
  "#2e8b57",
  "#a5553b",
  "#3b6ea5",
  "#8b5e83",
  "#6b7f3b",
];

export function posterUrl(assetPath: string, posterKey: string): string {
  return `${assetPath.replace(/\/$/, "")}/${posterKey}.jpg`;
}

/** Deterministic inline-SVG tile used when the real poster is missing. */
export function placeholderPoster(posterKey: string, title: string): string {
  let hash = 0;
  for (const ch of posterKey) {
    hash = (hash * 31 + ch.charCodeAt(0)) >>> 0;
  }
  const color = PLACEHOLDER_PALETTE[hash % PLACEHOLDER_PALETTE.length];
  const label = title.length > 18 ? `${title.slice(0, 17)}…` : title;
  const svg =
    `<svg xmlns="http://www.w3.org/2000/svg" width="120" height="180">` +
    `<rect width="120" height="180" fill="${color}"/>` +
    `<text x="60" y="90" font-size="11" fill="white" text-anchor="middle" ` +
    `font-family="sans-serif">${escapeXml(label)}</text></svg>`;
  return `data:image/svg+xml;utf8,${encodeURIComponent(svg)}`;
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
