"""Instance and solution file formats.

Text format, one record per line (``#`` starts a comment)::

    wtap <n> <number of links>
    edge u v            (n-1 lines)
    link u v cost       (cost as an integer or p/q)
    root r              (optional)

The JSON mirror is ``{"n", "edges": [[u, v]], "links": [[u, v, "cost"]], "root"}``.
"""
from __future__ import annotations

import json
from fractions import Fraction

from .errors import PreconditionError
from .instance import WtapInstance, as_fraction, frac_str


def _build(n, edges, links, root):
    nodes = set()
    for u, v in edges:
        nodes.update((u, v))
    if not nodes:
        nodes = {0} if n == 1 else set(range(n))
    if len(nodes) != n:
        raise PreconditionError(f"header says {n} nodes, edges mention {len(nodes)}")
    if len(edges) != n - 1:
        raise PreconditionError(f"expected {n - 1} edge lines, got {len(edges)}")
    return WtapInstance(nodes, edges, links, root=root)


def parse_text(text: str) -> WtapInstance:
    header = None
    edges, links, root = [], [], None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "wtap" and len(parts) == 3:
                header = (int(parts[1]), int(parts[2]))
            elif parts[0] == "edge" and len(parts) == 3:
                edges.append((int(parts[1]), int(parts[2])))
            elif parts[0] == "link" and len(parts) == 4:
                links.append((int(parts[1]), int(parts[2]), as_fraction(parts[3])))
            elif parts[0] == "root" and len(parts) == 2:
                root = int(parts[1])
            else:
                raise PreconditionError(f"line {lineno}: cannot parse {raw!r}")
        except ValueError as exc:
            raise PreconditionError(f"line {lineno}: {exc}") from exc
    if header is None:
        raise PreconditionError("missing 'wtap <n> <m>' header")
    n, m = header
    if len(links) != m:
        raise PreconditionError(f"header says {m} links, found {len(links)}")
    return _build(n, edges, links, root)


def parse_json(text: str) -> WtapInstance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PreconditionError(f"invalid JSON: {exc}") from exc
    try:
        edges = [(int(u), int(v)) for u, v in data["edges"]]
        links = []
        for item in data["links"]:
            if isinstance(item, dict):
                links.append((int(item["u"]), int(item["v"]), as_fraction(item["cost"])))
            else:
                links.append((int(item[0]), int(item[1]), as_fraction(item[2])))
        n = int(data.get("n", len(edges) + 1))
    except (KeyError, TypeError, ValueError) as exc:
        raise PreconditionError(f"malformed instance JSON: {exc}") from exc
    return _build(n, edges, links, data.get("root"))


def parse_instance(text: str) -> WtapInstance:
    return parse_json(text) if text.lstrip().startswith("{") else parse_text(text)


def read_instance(path: str) -> WtapInstance:
    import sys

    if path == "-":
        return parse_instance(sys.stdin.read())
    try:
        with open(path) as fh:
            return parse_instance(fh.read())
    except OSError as exc:
        raise PreconditionError(f"cannot read {path}: {exc}") from exc


def to_text(instance: WtapInstance) -> str:
    lines = [f"wtap {len(instance.nodes)} {len(instance.links)}"]
    lines += [f"edge {e.u} {e.v}" for e in instance.edges]
    lines += [f"link {l.u} {l.v} {frac_str(l.cost)}" for l in instance.links]
    if instance.root is not None:
        lines.append(f"root {instance.root}")
    return "\n".join(lines) + "\n"


def to_json(instance: WtapInstance) -> dict:
    return {
        "n": len(instance.nodes),
        "edges": [[e.u, e.v] for e in instance.edges],
        "links": [[l.u, l.v, frac_str(l.cost)] for l in instance.links],
        "root": instance.root,
    }


def solution_json(instance: WtapInstance, links) -> dict:
    from .instance import is_feasible

    links = sorted(links, key=lambda l: l.id)
    return {
        "links": [{"id": l.id, "u": l.u, "v": l.v, "cost": frac_str(l.cost)} for l in links],
        "cost": frac_str(sum((l.cost for l in links), Fraction(0))),
        "feasible": is_feasible(instance, links),
    }


def parse_solution_values(text: str) -> dict:
    """``{"link id": "p/q"}`` into a fractional solution."""
    try:
        data = json.loads(text)
        return {int(k): as_fraction(v) for k, v in data.items()}
    except (json.JSONDecodeError, AttributeError, ValueError) as exc:
        raise PreconditionError(f"malformed solution values: {exc}") from exc
