"""Text formats: graphs, arenas, assignments, traces, certificates, weighted
instances and hypergraphs.

All formats are line oriented; blank lines and ``#`` comments are ignored
and vertex numbers in files are 1-based.
"""
import logging
import sys
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from src.assignment import (Assignment, AssignmentStats, AugmentedGraph, Certificate, MatchingCert,
                            TraceStep, ViolatorCert, augment)
from src.graphs import RESERVED_LABEL, BipartiteGraph, Graph
from src.hungarian import MISSING_EDGE, WeightedBipartiteGraph
from src.hypergraph import HyperAssignment, Hypergraph
from src.lib.errors import InputError, ParseError

logger = logging.getLogger(__name__)

BOTTOM_TOKEN = RESERVED_LABEL
MISSING_TOKEN = "x"


def read_input(path: str) -> str:
    """Contents of ``path``, or of standard input for ``-``."""
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except UnicodeDecodeError as exc:
        raise InputError(f"cannot read {path}: not UTF-8 text at byte {exc.start}") from None


def _lines(text: str) -> Iterator[Tuple[int, str]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line


def _int(token: str, number: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"expected an integer, got {token!r}", number) from None


def _check_label_token(token: str, number: int) -> None:
    if token == RESERVED_LABEL:
        raise ParseError(f"label {RESERVED_LABEL!r} is reserved for bottom", number)


def _expect(tokens: List[str], count: int, number: int, form: str) -> None:
    if len(tokens) != count:
        raise ParseError(f"expected '{form}'", number)


def _header(text: str, kind: str, fields: int) -> Tuple[int, List[int]]:
    for number, line in _lines(text):
        tokens = line.split()
        if tokens[0] != "p":
            raise ParseError("the first line must be the 'p' header", number)
        if len(tokens) < 2 or tokens[1] != kind:
            raise ParseError(f"expected a 'p {kind}' header", number)
        _expect(tokens, fields + 2, number, f"p {kind}" + " <int>" * fields)
        values = [_int(t, number) for t in tokens[2:]]
        if any(v < 0 for v in values):
            raise ParseError("header sizes must be nonnegative", number)
        return number, values
    raise ParseError(f"missing 'p {kind}' header")


def _graph_body(text: str, header_line: int, n: int, on_edge: Callable[[int, int, int], None],
                extra: Optional[Callable[[List[str], int], bool]] = None) -> Tuple[int, List[str]]:
    labels = [str(i + 1) for i in range(n)]
    seen_labels: Dict[int, int] = {}
    edges = 0
    for number, line in _lines(text):
        if number <= header_line:
            continue
        tokens = line.split()
        tag = tokens[0]
        if tag == "e":
            _expect(tokens, 3, number, "e <i> <j>")
            i, j = _int(tokens[1], number), _int(tokens[2], number)
            for x in (i, j):
                if not 1 <= x <= n:
                    raise ParseError(f"vertex {x} out of range 1..{n}", number)
            on_edge(i - 1, j - 1, number)
            edges += 1
        elif tag == "l":
            _expect(tokens, 3, number, "l <i> <label>")
            i = _int(tokens[1], number)
            if not 1 <= i <= n:
                raise ParseError(f"vertex {i} out of range 1..{n}", number)
            if i in seen_labels:
                raise ParseError(f"vertex {i} already labelled on line {seen_labels[i]}", number)
            seen_labels[i] = number
            _check_label_token(tokens[2], number)
            labels[i - 1] = tokens[2]
        elif tag == "p":
            raise ParseError("duplicate header", number)
        elif extra is None or not extra(tokens, number):
            raise ParseError(f"unknown line type {tag!r}", number)
    return edges, labels


def _with_labels(build, labels: Sequence[str]):
    try:
        return build(labels)
    except ParseError:
        raise
    except InputError as exc:
        raise ParseError(str(exc)) from None


def parse_bipartite(text: str) -> BipartiteGraph:
    header_line, (n1, n2, m) = _header(text, "bip", 3)
    n = n1 + n2
    edges: List[Tuple[int, int]] = []
    seen = set()

    def on_edge(i: int, j: int, number: int) -> None:
        if (i < n1) == (j < n1):
            raise ParseError(f"edge {i + 1} {j + 1} lies within one side", number)
        pair = (min(i, j), max(i, j))
        if pair in seen:
            raise ParseError(f"duplicate edge {pair[0] + 1} {pair[1] + 1}", number)
        seen.add(pair)
        edges.append(pair)

    count, labels = _graph_body(text, header_line, n, on_edge)
    if count != m:
        raise ParseError(f"header announces {m} edges, found {count}")
    return _with_labels(lambda ls: BipartiteGraph.from_edges(n1, n2, edges, ls), labels)


def _label_lines(labels: Sequence[str]) -> List[str]:
    return [f"l {i + 1} {label}" for i, label in enumerate(labels) if label != str(i + 1)]


def render_bipartite(g: BipartiteGraph) -> str:
    if g.side1 != frozenset(range(g.n1)):
        raise InputError("only graphs with V1 numbered first can be rendered")
    edges = g.edges()
    lines = [f"p bip {g.n1} {g.n2} {len(edges)}"]
    lines += [f"e {u + 1} {v + 1}" for u, v in edges]
    lines += _label_lines(g.graph.labels)
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Tuple[Graph, int]:
    """A general graph with its designated start vertex v0."""
    header_line, (n, m) = _header(text, "graph", 2)
    edges: List[Tuple[int, int]] = []
    seen = set()
    start: List[int] = []

    def on_edge(i: int, j: int, number: int) -> None:
        if i == j:
            raise ParseError(f"self-loop at vertex {i + 1}", number)
        pair = (min(i, j), max(i, j))
        if pair in seen:
            raise ParseError(f"duplicate edge {pair[0] + 1} {pair[1] + 1}", number)
        seen.add(pair)
        edges.append(pair)

    def on_start(tokens: List[str], number: int) -> bool:
        if tokens[0] != "v0":
            return False
        _expect(tokens, 2, number, "v0 <i>")
        if start:
            raise ParseError("v0 given twice", number)
        i = _int(tokens[1], number)
        if not 1 <= i <= n:
            raise ParseError(f"vertex {i} out of range 1..{n}", number)
        start.append(i - 1)
        return True

    count, labels = _graph_body(text, header_line, n, on_edge, on_start)
    if count != m:
        raise ParseError(f"header announces {m} edges, found {count}")
    if not start:
        raise ParseError("missing 'v0 <i>' line")
    return _with_labels(lambda ls: Graph.from_edges(n, edges, ls), labels), start[0]


def render_graph(g: Graph, v0: int) -> str:
    edges = g.edges()
    lines = [f"p graph {g.vertex_count} {len(edges)}"]
    lines += [f"e {u + 1} {v + 1}" for u, v in edges]
    lines += _label_lines(g.labels)
    lines.append(f"v0 {v0 + 1}")
    return "\n".join(lines) + "\n"


def load_arena(text: str) -> AugmentedGraph:
    """A bipartite file (augmented here) or a ``p graph`` file with its v0."""
    for number, line in _lines(text):
        tokens = line.split()
        if tokens[:2] == ["p", "bip"]:
            return augment(parse_bipartite(text))
        if tokens[:2] == ["p", "graph"]:
            graph, v0 = parse_graph(text)
            try:
                return AugmentedGraph.from_start(graph, v0)
            except InputError as exc:
                raise ParseError(str(exc)) from None
        raise ParseError("expected a 'p bip' or 'p graph' header", number)
    raise ParseError("empty input")


def _sigma_lines(label: Callable[[int], str], sigma: Sequence[Optional[int]]) -> List[str]:
    return [f"sigma {label(v)} {BOTTOM_TOKEN if u is None else label(u)}" for v, u in enumerate(sigma)]


def _reachable_line(label: Callable[[int], str], reachable) -> str:
    return "R: " + " ".join(label(v) for v in sorted(reachable))


def render_stats(stats: AssignmentStats) -> str:
    return f"stats iterations={stats.iterations} introductions={stats.introductions} deletions={stats.deletions}"


def render_assignment(ga: AugmentedGraph, a: Assignment, stats: Optional[AssignmentStats] = None) -> str:
    lines = _sigma_lines(ga.label, a.sigma)
    lines.append(_reachable_line(ga.label, a.reachable))
    if stats is not None:
        lines.append(render_stats(stats))
    return "\n".join(lines) + "\n"


def _parse_sigma_and_r(text: str, n: int, index_of: Callable[[str], int],
                       value_of: Callable[[str], int]):
    sigma: List[Optional[int]] = [None] * n
    given: Dict[int, int] = {}
    reachable = None
    stats = None
    for number, line in _lines(text):
        tokens = line.split()
        try:
            if tokens[0] == "sigma":
                _expect(tokens, 3, number, "sigma <vertex> <vertex|_>")
                v = index_of(tokens[1])
                if v in given:
                    raise ParseError(f"sigma({tokens[1]}) already given on line {given[v]}", number)
                given[v] = number
                sigma[v] = None if tokens[2] == BOTTOM_TOKEN else value_of(tokens[2])
            elif tokens[0] == "R:":
                if reachable is not None:
                    raise ParseError("R given twice", number)
                reachable = frozenset(index_of(t) for t in tokens[1:])
            elif tokens[0] == "stats":
                stats = _parse_stats(tokens[1:], number)
            else:
                raise ParseError(f"unknown line type {tokens[0]!r}", number)
        except ParseError:
            raise
        except InputError as exc:
            raise ParseError(str(exc), number) from None
    if reachable is None:
        raise ParseError("missing 'R:' line")
    return reachable, tuple(sigma), stats


def _parse_stats(tokens: List[str], number: int) -> Dict[str, int]:
    stats = {}
    for token in tokens:
        key, sep, value = token.partition("=")
        if not sep:
            raise ParseError(f"expected key=value, got {token!r}", number)
        stats[key] = _int(value, number)
    return stats


def parse_assignment(text: str, ga: AugmentedGraph) -> Tuple[Assignment, Optional[Dict[str, int]]]:
    """Vertices without a sigma line get bottom."""
    index_of = ga.graph.index_of
    reachable, sigma, stats = _parse_sigma_and_r(text, ga.vertex_count, index_of, index_of)
    return Assignment(reachable, sigma), stats


def render_trace(ga: AugmentedGraph, steps: Sequence[TraceStep]) -> str:
    lines = []
    for step in steps:
        y = BOTTOM_TOKEN if step.y is None else ga.label(step.y)
        lines.append(f"step {step.step} {step.kind} {ga.label(step.x)} {y}")
    return "\n".join(lines) + ("\n" if lines else "")


def parse_trace(text: str, ga: AugmentedGraph) -> Tuple[TraceStep, ...]:
    steps = []
    for number, line in _lines(text):
        tokens = line.split()
        if tokens[0] != "step":
            raise ParseError(f"unknown line type {tokens[0]!r}", number)
        _expect(tokens, 5, number, "step <k> intro|del <x> <y|_>")
        kind = tokens[2]
        if kind not in ("intro", "del"):
            raise ParseError(f"unknown step kind {kind!r}", number)
        try:
            x = ga.graph.index_of(tokens[3])
            if tokens[4] == BOTTOM_TOKEN:
                if kind == "del":
                    raise ParseError("a deletion names two vertices", number)
                y = None
            else:
                y = ga.graph.index_of(tokens[4])
        except ParseError:
            raise
        except InputError as exc:
            raise ParseError(str(exc), number) from None
        steps.append(TraceStep(_int(tokens[1], number), kind, x, y))
    return tuple(steps)


def render_certificate(g: BipartiteGraph, cert: Certificate) -> str:
    label = g.label
    if isinstance(cert, MatchingCert):
        lines = ["MATCHING"] + [f"e {label(u)} {label(v)}" for u, v in sorted(cert.edges)]
    else:
        lines = [
            "VIOLATOR",
            "S: " + " ".join(label(v) for v in sorted(cert.subset)),
            "N(S): " + " ".join(label(v) for v in sorted(cert.witness_neighborhood)),
        ]
    return "\n".join(lines) + "\n"


def parse_certificate(text: str, g: BipartiteGraph) -> Certificate:
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty certificate")
    number, kind = lines[0]
    index_of = g.graph.index_of
    try:
        if kind == "MATCHING":
            edges = []
            for number, line in lines[1:]:
                tokens = line.split()
                if tokens[0] != "e":
                    raise ParseError(f"unknown line type {tokens[0]!r}", number)
                _expect(tokens, 3, number, "e <u> <w>")
                u, w = index_of(tokens[1]), index_of(tokens[2])
                edges.append((u, w) if u in g.side1 else (w, u))
            return MatchingCert(frozenset(edges))
        if kind == "VIOLATOR":
            parts = {}
            for number, line in lines[1:]:
                head, sep, rest = line.partition(":")
                if not sep or head not in ("S", "N(S)"):
                    raise ParseError("expected 'S:' or 'N(S):'", number)
                parts[head] = frozenset(index_of(t) for t in rest.split())
            if set(parts) != {"S", "N(S)"}:
                raise ParseError("a violator needs both 'S:' and 'N(S):' lines")
            return ViolatorCert(parts["S"], parts["N(S)"])
    except ParseError:
        raise
    except InputError as exc:
        raise ParseError(str(exc), number) from None
    raise ParseError("expected MATCHING or VIOLATOR", number)


def parse_weighted(text: str) -> WeightedBipartiteGraph:
    header_line, (n,) = _header(text, "wbip", 1)
    rows = []
    for number, line in _lines(text):
        if number <= header_line:
            continue
        tokens = line.split()
        if len(tokens) != n:
            raise ParseError(f"expected {n} weights, got {len(tokens)}", number)
        rows.append([MISSING_EDGE if t == MISSING_TOKEN else _int(t, number) for t in tokens])
    if len(rows) != n:
        raise ParseError(f"expected {n} rows of weights, got {len(rows)}")
    try:
        return WeightedBipartiteGraph(np.array(rows, dtype=np.int64).reshape(n, n))
    except InputError as exc:
        raise ParseError(str(exc)) from None


def render_weighted(g: WeightedBipartiteGraph) -> str:
    lines = [f"p wbip {g.n}"]
    for row in g.weights:
        lines.append(" ".join(MISSING_TOKEN if w == MISSING_EDGE else str(int(w)) for w in row))
    return "\n".join(lines) + "\n"


def parse_hypergraph(text: str) -> Tuple[Hypergraph, Optional[frozenset]]:
    """A hypergraph and the independent transversal of its ``U:`` line, if any."""
    header_line, (n, m) = _header(text, "hyp", 2)
    members: Dict[int, List[int]] = {}
    labels = [str(i + 1) for i in range(n)]
    u_set = None

    def vertex(token: str, number: int) -> int:
        i = _int(token, number)
        if not 1 <= i <= n:
            raise ParseError(f"hypervertex {i} out of range 1..{n}", number)
        return i - 1

    for number, line in _lines(text):
        if number <= header_line:
            continue
        head, sep, rest = line.partition(":")
        head_tokens = head.split()
        if sep and head_tokens and head_tokens[0] == "h":
            _expect(head_tokens, 2, number, "h <j>: <i1> <i2> ...")
            j = _int(head_tokens[1], number)
            if not 1 <= j <= m:
                raise ParseError(f"hyperedge {j} out of range 1..{m}", number)
            if j in members:
                raise ParseError(f"hyperedge {j} given twice", number)
            vs = [vertex(t, number) for t in rest.split()]
            if len(set(vs)) != len(vs):
                raise ParseError(f"hyperedge {j} repeats a hypervertex", number)
            if not vs:
                raise ParseError(f"hyperedge {j} is empty", number)
            members[j] = vs
        elif sep and head.strip() == "U":
            if u_set is not None:
                raise ParseError("U given twice", number)
            u_set = frozenset(vertex(t, number) for t in rest.split())
        elif head_tokens and head_tokens[0] == "l" and not sep:
            _expect(head_tokens, 3, number, "l <i> <label>")
            _check_label_token(head_tokens[2], number)
            labels[vertex(head_tokens[1], number)] = head_tokens[2]
        else:
            raise ParseError(f"unknown line {line!r}", number)
    if set(members) != set(range(1, m + 1)):
        missing = sorted(set(range(1, m + 1)) - set(members))
        raise ParseError(f"hyperedges {' '.join(map(str, missing))} not given")
    edge_labels = [f"e{j}" for j in range(1, m + 1)]
    edges = [members[j] for j in range(1, m + 1)]
    try:
        return Hypergraph.from_edges(n, edges, labels + edge_labels), u_set
    except InputError as exc:
        raise ParseError(str(exc)) from None


def render_hypergraph(h: Hypergraph, u_set=None) -> str:
    lines = [f"p hyp {h.vertex_count} {h.edge_count}"]
    for j, members in enumerate(h.edge_lists(), start=1):
        lines.append(f"h {j}: " + " ".join(str(v + 1) for v in members))
    lines += _label_lines(h.graph.labels[:h.vertex_count])
    if u_set is not None:
        lines.append("U: " + " ".join(str(u + 1) for u in sorted(u_set)))
    return "\n".join(lines) + "\n"


def render_hyper_assignment(label: Callable[[int], str], a: HyperAssignment) -> str:
    lines = _sigma_lines(label, a.sigma)
    lines.append(_reachable_line(label, a.reachable))
    return "\n".join(lines) + "\n"


def parse_hyper_assignment(text: str, h2: Hypergraph) -> HyperAssignment:
    def hyperedge(token: str) -> int:
        e = h2.index_of(token)
        if not h2.is_hyperedge(e):
            raise InputError(f"{token} is not a hyperedge")
        return e

    def hypervertex(token: str) -> int:
        v = h2.index_of(token)
        if not h2.is_vertex(v):
            raise InputError(f"{token} is not a hypervertex")
        return v

    reachable, sigma, _ = _parse_sigma_and_r(text, h2.vertex_count, hypervertex, hyperedge)
    return HyperAssignment(reachable, sigma)

