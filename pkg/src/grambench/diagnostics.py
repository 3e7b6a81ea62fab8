"""Feedback on failed parses: largest recognized fragments and the shortest
paths through the chart or substring table.

Both diagnostics operate on a plain view of passive edges, so they work the
same over a chart (GPSG, ID/LP) and a well-formed substring table (DCG,
LFG).  Positions not covered by any edge are bridged with one-token word
edges, so a report always spans the whole sentence.
"""

from __future__ import annotations

from dataclasses import dataclass

MAX_PATHS = 10


@dataclass(frozen=True)
class EdgeView:
    start: int
    end: int
    label: str
    id: int | None
    is_word: bool = False

    def to_json_dict(self):
        return {
            "from": self.start,
            "to": self.end,
            "label": self.label,
            "edge_id": self.id,
            "is_word": self.is_word,
        }


def chart_view(chart):
    """Passive constituent and word edges of a chart, zero-width ones dropped."""
    views = []
    for e in chart.passive_edges():
        if e.end <= e.start:
            continue
        views.append(EdgeView(e.start, e.end, e.label, e.id, e.kind == "word"))
    return views


def wfst_view(wfst):
    """Success entries of a substring table as edge views."""
    views = []
    for start, end, label, entry_id in wfst.edge_views():
        if end <= start:
            continue
        views.append(EdgeView(start, end, label, entry_id, False))
    return views


def _augment(edges, tokens):
    """Add a one-token word edge wherever no edge starts."""
    starts = {e.start for e in edges}
    out = list(edges)
    for i, token in enumerate(tokens):
        if i not in starts:
            out.append(EdgeView(i, i + 1, token, None, True))
    return out


@dataclass(frozen=True)
class FragmentReport:
    fragments: tuple[EdgeView, ...]
    coverage: float  # tokens under real constituent edges / all tokens

    def render(self, tokens=None):
        lines = ["recognized fragments:"]
        for f in self.fragments:
            words = ""
            if tokens is not None:
                words = " " + " ".join(tokens[f.start : f.end])
            kind = "word" if f.is_word else "constituent"
            lines.append(f"  [{f.start}-{f.end}] {f.label} ({kind}){words}")
        lines.append(f"coverage: {self.coverage:.2f}")
        return "\n".join(lines)

    def to_json_dict(self):
        return {
            "fragments": [f.to_json_dict() for f in self.fragments],
            "coverage": self.coverage,
        }


def largest_fragments(edges, tokens):
    """Greedy left-to-right selection of the longest passive edges.

    From the start of the sentence take the longest fragment, from its end
    the next longest, and so on; positions without any edge contribute the
    token itself as a one-token fragment.  Length ties go to the edge parsed
    last (highest id).
    """
    n = len(tokens)
    by_start = {}
    for e in _augment(edges, tokens):
        by_start.setdefault(e.start, []).append(e)
    fragments = []
    pos = 0
    while pos < n:
        candidates = [e for e in by_start.get(pos, ()) if e.end > pos]
        if not candidates:
            fragments.append(EdgeView(pos, pos + 1, tokens[pos], None, True))
            pos += 1
            continue
        best = max(candidates, key=lambda e: (e.end - e.start, _tie(e)))
        fragments.append(best)
        pos = best.end
    covered = sum(f.end - f.start for f in fragments if not f.is_word)
    return FragmentReport(tuple(fragments), covered / n if n else 1.0)


def _tie(edge):
    return -1 if edge.id is None else edge.id


@dataclass(frozen=True)
class ChartPath:
    edges: tuple[EdgeView, ...]

    def __len__(self):
        return len(self.edges)

    def labels(self):
        return [e.label for e in self.edges]

    def to_json_dict(self):
        return {"edges": [e.to_json_dict() for e in self.edges]}


def shortest_paths(edges, tokens, cap=MAX_PATHS):
    """All paths of passive edges from 0 to n with the fewest edges.

    Uncovered positions are bridged by word edges.  Returns at most ``cap``
    paths, in a deterministic order (edge start, then id).
    """
    n = len(tokens)
    arcs = {}
    for e in _augment(edges, tokens):
        arcs.setdefault(e.start, []).append(e)
    for key in arcs:
        arcs[key] = sorted(arcs[key], key=lambda e: (e.end, _tie(e)))
    # Breadth-first layering by edge count.
    dist = {0: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for pos in frontier:
            for e in arcs.get(pos, ()):
                if e.end not in dist:
                    dist[e.end] = dist[pos] + 1
                    nxt.append(e.end)
        frontier = nxt
    if n not in dist:
        return []
    paths = []

    def extend(pos, acc):
        if len(paths) >= cap:
            return
        if pos == n:
            paths.append(ChartPath(tuple(acc)))
            return
        for e in arcs.get(pos, ()):
            if e.end <= n and dist.get(e.end) == dist[pos] + 1 and dist[e.end] <= dist[n]:
                extend(e.end, acc + [e])

    extend(0, [])
    return paths
