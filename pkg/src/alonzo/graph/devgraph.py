"""The development graph: theories as nodes, translations as edges."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import List, Optional


@dataclass(frozen=True)
class Edge:
    name: str
    src: str
    dst: str
    inclusion: bool
    morphism: Optional[bool]  # None when not certified
    from_extend: bool = False  # inclusion generated by an extension

    @property
    def style(self) -> str:
        return "inclusion" if self.inclusion else "noninclusion"


@dataclass
class DevGraph:
    nodes: List[str] = field(default_factory=list)
    edges: List[Edge] = field(default_factory=list)
    developments: dict = field(default_factory=dict)  # theory -> [development]

    def inclusions(self) -> List[Edge]:
        return [e for e in self.edges if e.inclusion]


def build_graph(ws) -> DevGraph:
    """Nodes are the theories of the workspace minus ``ws.graph_exclude``;
    hidden inclusions only serve the inclusion convention and are not
    drawn."""
    g = DevGraph()
    keep = [n for n in ws.theories if n not in ws.graph_exclude]
    g.nodes = keep
    for d in ws.devs.values():
        if d.bottom.name in keep:
            g.developments.setdefault(d.bottom.name, []).append(d.name)
    for t in ws.translations.values():
        if t.hidden or t.src.name not in keep or t.dst.name not in keep:
            continue
        morphism = None
        if t.certificate is not None:
            morphism = t.rejection is None
        g.edges.append(Edge(t.name, t.src.name, t.dst.name, t.inclusion, morphism, t.implicit))
    return g


def _q(s: str) -> str:
    s = s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
    return '"' + s + '"'


def export_graph(g: DevGraph, format: str = "dot") -> bytes:
    if format == "json":
        return (json.dumps({
            "nodes": g.nodes,
            "edges": [{"name": e.name, "src": e.src, "dst": e.dst, "style": e.style,
                       "morphism": e.morphism} for e in g.edges],
            "developments": g.developments,
        }, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    if format != "dot":
        raise ValueError(f"unknown graph format {format!r}")
    lines = ["digraph development_graph {", "  rankdir=BT;", "  node [shape=box];"]
    for n in g.nodes:
        devs = g.developments.get(n, [])
        label = n if not devs else n + "\n" + ", ".join(devs)
        lines.append(f"  {_q(n)} [label={_q(label)}];")
    for e in g.edges:
        attrs = ["style=dashed", "arrowhead=onormal"] if e.inclusion else ["style=solid"]
        if not e.inclusion:
            attrs.append(f"label={_q(e.name)}")
        if e.morphism is False:
            attrs.append("color=red")
        lines.append(f"  {_q(e.src)} -> {_q(e.dst)} [{', '.join(attrs)}];")
    lines.append("}")
    return ("\n".join(lines) + "\n").encode("utf-8")
