"""The monoid corpus: module files for the theories, developments and
translations built around the theory of monoids."""

from __future__ import annotations

from importlib import resources
from pathlib import Path
from typing import Dict, List

from ..graph.workspace import Workspace, load_texts

DIR = Path(__file__).resolve().parent  # the module files, for tools that want paths


def manifest() -> Dict[str, str]:
    """Flat ``key = value`` pairs; ``#`` starts a comment."""
    out = {}
    text = resources.files(__name__).joinpath("manifest.txt").read_text(encoding="utf-8")
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        k, _, v = line.partition("=")
        out[k.strip()] = v.strip()
    return out


def files() -> List[str]:
    return manifest()["files"].split()


def read(name: str) -> str:
    return resources.files(__name__).joinpath(name).read_text(encoding="utf-8")


def load_corpus(certify: bool = True) -> Workspace:
    m = manifest()
    ws = load_texts([read(f) for f in files()], certify=certify)
    ws.graph_exclude = set(m.get("graph_exclude", "").split())
    return ws
