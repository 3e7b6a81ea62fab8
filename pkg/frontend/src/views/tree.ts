// Zoomable parse tree view: vertical indented layout with collapse/expand,
// a click on any node toggles its complete feature structure, and zooming
// narrows the view to a subtree (structures of arbitrary size stay
// navigable without endless scrolling).

import { Reading, TreeNode } from "../api.js";
import { button, clear, el } from "../dom.js";

export class TreeView {
  root: HTMLElement;
  reading: Reading | null = null;
  zoomStack: number[][] = [];
  collapsed = new Set<string>();
  featuresShown = new Set<string>();

  constructor(root: HTMLElement) {
    this.root = root;
    this.root.classList.add("tree-view");
  }

  render(reading: Reading): void {
    this.reading = reading;
    this.zoomStack = [];
    this.collapsed.clear();
    this.featuresShown.clear();
    this.redraw();
  }

  get zoomPath(): number[] {
    return this.zoomStack.length
      ? this.zoomStack[this.zoomStack.length - 1]
      : [];
  }

  nodeAt(path: number[]): TreeNode {
    let node = this.reading!.tree;
    for (const index of path) {
      node = node.children[index];
    }
    return node;
  }

  redraw(): void {
    clear(this.root);
    if (this.reading === null) {
      this.root.appendChild(el("p", "empty-hint", "no reading selected"));
      return;
    }
    const bar = el("div", "tree-toolbar");
    if (this.zoomStack.length) {
      bar.appendChild(
        button("zoom out", "zoom-out", () => {
          this.zoomStack.pop();
          this.redraw();
        })
      );
      bar.appendChild(
        el("span", "zoom-crumb", "at " + (this.zoomPath.join("/") || "root"))
      );
    }
    this.root.appendChild(bar);
    const top = this.nodeAt(this.zoomPath);
    this.root.appendChild(this.renderNode(top, this.zoomPath));
    if (this.reading.fstructure_indented) {
      const fpanel = el("div", "fstructure");
      fpanel.appendChild(el("h4", "", "f-structure"));
      fpanel.appendChild(el("pre", "", this.reading.fstructure_indented));
      this.root.appendChild(fpanel);
    }
  }

  private renderNode(node: TreeNode, path: number[]): HTMLElement {
    const key = path.join("/");
    const container = el("div", "tree-node");
    const line = el("div", "tree-line");
    const isLeaf = node.children.length === 0;

    if (!isLeaf) {
      const toggle = button(this.collapsed.has(key) ? "+" : "-", "collapse", () => {
        if (this.collapsed.has(key)) {
          this.collapsed.delete(key);
        } else {
          this.collapsed.add(key);
        }
        this.redraw();
      });
      line.appendChild(toggle);
    }

    const label = el("span", isLeaf ? "word" : "label", node.label);
    label.addEventListener("click", () => {
      if (this.featuresShown.has(key)) {
        this.featuresShown.delete(key);
      } else {
        this.featuresShown.add(key);
      }
      this.redraw();
    });
    line.appendChild(label);

    if (!isLeaf) {
      const zoom = button("◎", "zoom", () => {
        this.zoomStack.push(path.slice());
        this.redraw();
      });
      zoom.title = "zoom into this constituent";
      line.appendChild(zoom);
    }
    line.appendChild(el("span", "span-tag", `${node.span[0]}–${node.span[1]}`));
    container.appendChild(line);

    if (this.featuresShown.has(key)) {
      container.appendChild(el("div", "features", node.features));
    }

    if (!isLeaf && !this.collapsed.has(key)) {
      const kids = el("div", "tree-children");
      node.children.forEach((child, index) => {
        kids.appendChild(this.renderNode(child, path.concat(index)));
      });
      container.appendChild(kids);
    }
    return container;
  }
}

// Multiple readings open side by side, each with its own zoom state.
export class ReadingGallery {
  root: HTMLElement;
  views: TreeView[] = [];

  constructor(root: HTMLElement) {
    this.root = root;
    this.root.classList.add("reading-gallery");
  }

  render(readings: Reading[]): void {
    clear(this.root);
    this.views = [];
    if (readings.length === 0) {
      this.root.appendChild(el("p", "empty-hint", "no readings"));
      return;
    }
    readings.forEach((reading, index) => {
      const pane = el("div", "reading-pane");
      pane.appendChild(el("h4", "", `reading ${index}`));
      const mount = el("div");
      pane.appendChild(mount);
      this.root.appendChild(pane);
      const view = new TreeView(mount);
      view.render(reading);
      this.views.push(view);
    });
  }
}
