/** Tiny DOM builders; attributes starting with "data-" land in dataset. */

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: (Node | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") node.className = value;
    else if (key === "text") node.textContent = value;
    else node.setAttribute(key, value);
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

export function clear(node: HTMLElement): void {
  while (node.firstChild) node.removeChild(node.firstChild);
}

export function banner(kind: "error" | "ok", text: string, code?: string): HTMLElement {
  const attrs: Record<string, string> = { class: `banner banner-${kind}`, text };
  if (code) attrs["data-code"] = code;
  return el("div", attrs);
}
