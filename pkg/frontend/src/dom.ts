// Tiny DOM helpers shared by the views.

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  klass?: string,
  text?: string
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (klass) {
    node.className = klass;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

export function clear(node: HTMLElement): HTMLElement {
  while (node.firstChild) {
    node.removeChild(node.firstChild);
  }
  return node;
}

export function button(
  label: string,
  klass: string,
  onClick: () => void
): HTMLButtonElement {
  const b = el("button", klass, label);
  b.addEventListener("click", onClick);
  return b;
}
