"""Plain-text instance files, the manifest, and candidate files.

An instance directory holds ``graph.txt`` (edge list), ``vertices.txt`` (labels),
``pairs.txt`` (critical pairs with run-length encoded canonical paths) and
``manifest.json`` (parameters, counts and digests). Every byte is a function of
the instance alone, so regenerating with the same flags reproduces the files.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any, Iterable

import numpy as np

from .errors import CorruptionError
from .graphs import EdgeKind, LayeredGraph, PairSet, VertexKind
from .instances import Instance
from .oracles import ShortcutSet, SpannerSubgraph, WeightedEmulator

FORMAT_VERSION = 1
FILES = ("graph.txt", "vertices.txt", "pairs.txt")


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _rows(arr: np.ndarray) -> Iterable[str]:
    for row in arr.tolist():
        yield " ".join(map(str, row))


def graph_text(g: LayeredGraph) -> str:
    head = [f"# lbgraphs graph v{FORMAT_VERSION}", f"directed {int(g.directed)}",
            f"layers {g.num_layers}", f"vertices {g.n}", f"edges {g.m}"]
    body = _rows(np.stack([g.src, g.dst], axis=1)) if g.m else []
    return "\n".join([*head, *body]) + "\n"


def vertices_text(g: LayeredGraph) -> str:
    head = [f"# lbgraphs vertices v{FORMAT_VERSION}", "blocks " + " ".join(map(str, g.coord_blocks)),
            "# id kind layer coords... provenance port"]
    table = np.column_stack([np.arange(g.n), g.vertex_kind, g.vertex_layer, g.coords, g.provenance, g.port_index])
    return "\n".join([*head, *_rows(table.astype(np.int64))]) + "\n"


def _runs(row: list[int]) -> str:
    out = []
    start, count = row[0], 1
    for e in row[1:]:
        if e == start + count:
            count += 1
        else:
            out.append(f"{start}:{count}")
            start, count = e, 1
    out.append(f"{start}:{count}")
    return " ".join(out)


def pairs_text(pairs: PairSet) -> str:
    head = [f"# lbgraphs pairs v{FORMAT_VERSION}", f"kind {pairs.instance_kind}", f"count {len(pairs)}"]
    for k, vs in enumerate(pairs.vectors):
        for j, v in enumerate(np.asarray(vs).tolist()):
            head.append(f"vector {k} {j} " + " ".join(map(str, v)))
    head.append("# source target expected_length | witness | start:count runs")
    lines = []
    for s, t, ln, w, p in zip(pairs.sources.tolist(), pairs.targets.tolist(), pairs.expected_length.tolist(),
                              pairs.witness.tolist(), pairs.paths.tolist()):
        lines.append(f"{s} {t} {ln} | {' '.join(map(str, w))} | {_runs(p) if p else ''}".rstrip())
    return "\n".join([*head, *lines]) + "\n"


def _manifest_body(inst: Instance, digests: dict[str, str]) -> dict[str, Any]:
    return {
        "format_version": FORMAT_VERSION,
        "kind": inst.kind,
        "params": inst.params,
        "derived": inst.derived,
        "counts": {"n": inst.graph.n, "m": inst.graph.m, "pairs": len(inst.pairs)},
        "files": digests,
    }


def _digest(body: dict[str, Any]) -> str:
    return _sha256(json.dumps(body, sort_keys=True, separators=(",", ":")).encode())


def write_instance(inst: Instance, out_dir: str | Path) -> dict[str, Any]:
    """Write the four instance files; returns the manifest."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    texts = {"graph.txt": graph_text(inst.graph), "vertices.txt": vertices_text(inst.graph),
             "pairs.txt": pairs_text(inst.pairs)}
    digests = {}
    for name in FILES:
        data = texts[name].encode()
        (out / name).write_bytes(data)
        digests[name] = _sha256(data)
    manifest = _manifest_body(inst, digests)
    manifest["digest"] = _digest(manifest)
    (out / "manifest.json").write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")
    return manifest


# ---------------------------------------------------------------------------
# reading


def _header(lines: list[str], key: str, pos: int) -> str:
    if pos >= len(lines) or not lines[pos].startswith(key + " "):
        raise CorruptionError(f"expected header '{key}' at line {pos + 1}")
    return lines[pos][len(key) + 1:]


def read_manifest(path: str | Path) -> dict[str, Any]:
    try:
        manifest = json.loads((Path(path) / "manifest.json").read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CorruptionError(f"unreadable manifest: {exc}") from exc
    claimed = manifest.pop("digest", None)
    if claimed != _digest(manifest):
        raise CorruptionError("manifest digest mismatch")
    manifest["digest"] = claimed
    if manifest.get("format_version") != FORMAT_VERSION:
        raise CorruptionError(f"unsupported format version {manifest.get('format_version')}")
    return manifest


def _derive_edge_kinds(kind: np.ndarray, prov: np.ndarray, src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    same = prov[src] == prov[dst]
    out = np.full(len(src), EdgeKind.INHERITED, dtype=np.int8)
    out[same & (kind[src] == VertexKind.CLIQUE_PORT) & (kind[dst] == VertexKind.CLIQUE_PORT)] = EdgeKind.CLIQUE
    out[same & (kind[src] == VertexKind.INNER) & (kind[dst] == VertexKind.INNER)] = EdgeKind.INNER
    return out


def parse_graph(graph_txt: str, vertices_txt: str) -> LayeredGraph:
    try:
        gl = graph_txt.splitlines()
        directed = bool(int(_header(gl, "directed", 1)))
        layers = int(_header(gl, "layers", 2))
        n = int(_header(gl, "vertices", 3))
        m = int(_header(gl, "edges", 4))
        edges = np.array([list(map(int, ln.split())) for ln in gl[5:]], dtype=np.int64).reshape(-1, 2)
        vl = vertices_txt.splitlines()
        blocks = tuple(int(x) for x in _header(vl, "blocks", 1).split())
        width = 5 + sum(blocks)
        table = np.array([list(map(int, ln.split())) for ln in vl[3:]], dtype=np.int64).reshape(-1, width)
    except (ValueError, IndexError) as exc:
        raise CorruptionError(f"malformed graph files: {exc}") from exc
    if len(edges) != m or len(table) != n:
        raise CorruptionError(f"header counts (n={n}, m={m}) disagree with {len(table)} vertices, {len(edges)} edges")
    if n and not np.array_equal(table[:, 0], np.arange(n)):
        raise CorruptionError("vertex ids are not 0..n-1 in order")
    if m and (edges.min() < 0 or edges.max() >= n):
        raise CorruptionError("edge endpoint out of range")
    kind = table[:, 1].astype(np.int8)
    prov = table[:, -2]
    src, dst = edges[:, 0].copy(), edges[:, 1].copy()
    return LayeredGraph(
        directed=directed, num_layers=layers, coord_blocks=blocks,
        vertex_kind=kind, vertex_layer=table[:, 2].astype(np.int32), coords=table[:, 3:3 + sum(blocks)],
        provenance=prov, port_index=table[:, -1],
        src=src, dst=dst, edge_kind=_derive_edge_kinds(kind, prov, src, dst),
        edge_origin=np.full(m, -1, dtype=np.int64), edge_step=np.full(m, -1, dtype=np.int64),
    )


def parse_pairs(text: str) -> PairSet:
    lines = text.splitlines()
    try:
        kind = _header(lines, "kind", 1)
        count = int(_header(lines, "count", 2))
        vecs: dict[int, list[list[int]]] = {}
        pos = 3
        while pos < len(lines) and lines[pos].startswith("vector "):
            parts = list(map(int, lines[pos].split()[1:]))
            vecs.setdefault(parts[0], []).append(parts[2:])
            pos += 1
        pos += 1
        src, dst, lens, wits, paths = [], [], [], [], []
        for ln in lines[pos:]:
            head, wit, runs = (x.strip() for x in ln.split("|"))
            s, t, length = map(int, head.split())
            path: list[int] = []
            for run in runs.split():
                a, c = map(int, run.split(":"))
                path.extend(range(a, a + c))
            src.append(s)
            dst.append(t)
            lens.append(length)
            wits.append(list(map(int, wit.split())))
            paths.append(path)
    except ValueError as exc:
        raise CorruptionError(f"malformed pairs file: {exc}") from exc
    if len(src) != count:
        raise CorruptionError(f"pairs header says {count}, file holds {len(src)}")
    if len({len(p) for p in paths}) > 1 or len({len(w) for w in wits}) > 1:
        raise CorruptionError("ragged canonical paths or witnesses")
    width = len(paths[0]) if paths else 0
    return PairSet(
        instance_kind=kind,
        sources=np.array(src, dtype=np.int64), targets=np.array(dst, dtype=np.int64),
        expected_length=np.array(lens, dtype=np.int64),
        paths=np.array(paths, dtype=np.int64).reshape(count, width),
        witness=np.array(wits, dtype=np.int64).reshape(count, -1 if count else 0),
        vectors=tuple(np.array(vecs[k], dtype=np.int64) for k in sorted(vecs)),
    )


def read_instance(path: str | Path) -> tuple[Instance, dict[str, Any]]:
    """Load and integrity-check an instance directory (digests, then recounts)."""
    root = Path(path)
    manifest = read_manifest(root)
    texts = {}
    for name in FILES:
        try:
            data = (root / name).read_bytes()
        except OSError as exc:
            raise CorruptionError(f"missing {name}: {exc}") from exc
        if _sha256(data) != manifest["files"].get(name):
            raise CorruptionError(f"{name} digest mismatch")
        texts[name] = data.decode()
    g = parse_graph(texts["graph.txt"], texts["vertices.txt"])
    pairs = parse_pairs(texts["pairs.txt"])
    counts = {"n": g.n, "m": g.m, "pairs": len(pairs)}
    if counts != manifest["counts"]:
        raise CorruptionError(f"recount {counts} differs from manifest {manifest['counts']}")
    if len(pairs) and (pairs.sources.max() >= g.n or pairs.targets.max() >= g.n
                       or (pairs.paths.size and pairs.paths.max() >= g.m)):
        raise CorruptionError("pairs reference ids outside the graph")
    return Instance(manifest["kind"], dict(manifest["params"]), g, pairs, dict(manifest["derived"])), manifest


# ---------------------------------------------------------------------------
# candidates


def _candidate_text(kind: str, digest: str, rows: Iterable[Iterable[int]]) -> str:
    head = [f"# lbgraphs {kind} v{FORMAT_VERSION}", f"instance {digest}"]
    return "\n".join([*head, *(" ".join(map(str, r)) for r in rows)]) + "\n"


def write_candidate(path: str | Path, digest: str,
                    candidate: ShortcutSet | SpannerSubgraph | WeightedEmulator) -> None:
    if isinstance(candidate, ShortcutSet):
        text = _candidate_text("shortcuts", digest, candidate.edges)
    elif isinstance(candidate, SpannerSubgraph):
        text = _candidate_text("spanner", digest, ([e] for e in sorted(candidate.edge_ids)))
    else:
        text = _candidate_text("emulator", digest, candidate.edges)
    Path(path).write_text(text)


def read_candidate(path: str | Path, digest: str) -> ShortcutSet | SpannerSubgraph | WeightedEmulator:
    """Parse a candidate file, insisting it was made for the instance with ``digest``."""
    try:
        lines = Path(path).read_text().splitlines()
        kind = lines[0].split()[2]
        claimed = _header(lines, "instance", 1)
        rows = [tuple(map(int, ln.split())) for ln in lines[2:] if ln.strip()]
    except (OSError, IndexError, ValueError) as exc:
        raise CorruptionError(f"malformed candidate file: {exc}") from exc
    if claimed != digest:
        raise CorruptionError("candidate was produced for a different instance")
    widths = {"shortcuts": 2, "spanner": 1, "emulator": 3}
    if kind not in widths or any(len(r) != widths[kind] for r in rows):
        raise CorruptionError(f"candidate rows do not match kind {kind!r}")
    if kind == "shortcuts":
        return ShortcutSet(tuple(rows))
    if kind == "spanner":
        return SpannerSubgraph(frozenset(r[0] for r in rows))
    return WeightedEmulator(tuple(rows))
