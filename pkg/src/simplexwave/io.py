"""File formats: complexes, signals, trees, dictionaries, matrices, curves."""

from __future__ import annotations

import csv
import json

import numpy as np
import scipy.sparse as sp

from .complexes import SimplicialComplex, from_simplices
from .dictionaries import Block, Dictionary
from .partition import BipartitionTree, TreeNode


class DataError(ValueError):
    """Malformed input data; the message names the file (and line if known)."""


def _json_load(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    except OSError as exc:
        raise DataError(f"{path}: {exc.strerror}") from exc


# -- complexes --------------------------------------------------------------


def load_complex(path) -> SimplicialComplex:
    """Read a complex from JSON: {"vertices": n, "simplices": [{"v", "p", "w"}]}.

    Missing faces are closed automatically; "p" defaults to +1 and "w" to 1.
    """
    data = _json_load(path)
    try:
        entries = [
            (item["v"], int(item.get("p", 1)), float(item.get("w", 1.0)))
            for item in data["simplices"]
        ]
        return from_simplices(entries, vertex_count=data.get("vertices"))
    except DataError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"{path}: {exc}") from exc


def dump_complex(c: SimplicialComplex, path) -> None:
    simplices = []
    for kappa in range(c.kappa_max + 1):
        for s in c.stratum(kappa):
            simplices.append(
                {"v": list(s.vertices), "p": s.orientation, "w": s.weight}
            )
    with open(path, "w") as fh:
        json.dump({"vertices": c.vertex_count, "simplices": simplices}, fh)


def load_edge_list(path) -> SimplicialComplex:
    """Read a 1-complex from plain text: one "u v [w]" triple per line."""
    entries = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            parts = text.split()
            if len(parts) not in (2, 3):
                raise DataError(f"{path}: line {lineno}: expected 'u v [w]'")
            try:
                u, v = int(parts[0]), int(parts[1])
                w = float(parts[2]) if len(parts) == 3 else 1.0
            except ValueError as exc:
                raise DataError(f"{path}: line {lineno}: {exc}") from exc
            if u == v:
                raise DataError(f"{path}: line {lineno}: loop edge {u}")
            entries.append(((u, v), 1, w))
    if not entries:
        raise DataError(f"{path}: no edges found")
    return from_simplices(entries)


# -- signals ----------------------------------------------------------------


def signal_key(vertices) -> str:
    return ",".join(str(v) for v in vertices)


def load_signal(path, c: SimplicialComplex, kappa: int | None = None) -> np.ndarray:
    """Read a per-simplex signal keyed by comma-joined sorted vertex lists."""
    data = _json_load(path)
    try:
        file_kappa = int(data["kappa"])
        values = data["values"]
    except (KeyError, TypeError) as exc:
        raise DataError(f"{path}: {exc}") from exc
    if kappa is not None and file_kappa != kappa:
        raise DataError(f"{path}: signal is for stratum {file_kappa}, not {kappa}")
    kappa = file_kappa
    out = np.full(c.size(kappa), np.nan)
    for key, value in values.items():
        verts = tuple(sorted(int(v) for v in key.split(",")))
        idx = c.index_of(kappa, verts)
        if idx is None:
            raise DataError(f"{path}: simplex {key} not in the complex")
        out[idx] = float(value)
    if np.any(np.isnan(out)):
        missing = int(np.sum(np.isnan(out)))
        raise DataError(f"{path}: {missing} simplices have no value")
    return out


def dump_signal(values, c: SimplicialComplex, kappa: int, path) -> None:
    data = {
        "kappa": kappa,
        "values": {
            signal_key(s.vertices): float(v)
            for s, v in zip(c.stratum(kappa), values)
        },
    }
    with open(path, "w") as fh:
        json.dump(data, fh)


def load_signal_matrix(path) -> np.ndarray:
    """Read a CSV matrix of signals, one signal per row."""
    try:
        rows = np.loadtxt(path, delimiter=",", ndmin=2)
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from exc
    return rows


# -- trees ------------------------------------------------------------------


def tree_to_dict(tree: BipartitionTree) -> dict:
    return {
        "kappa": tree.kappa,
        "n": tree.n,
        "j_max": tree.j_max,
        "nodes": [
            {
                "id": node.id,
                "j": node.depth,
                "k": _native_k(tree, node),
                "members": list(node.members),
                "children": list(node.children) if node.children else None,
            }
            for node in tree.nodes
        ],
    }


def _native_k(tree: BipartitionTree, node: TreeNode) -> int:
    return tree.levels[node.depth].index(node.id)


def dump_tree(tree: BipartitionTree, path) -> None:
    with open(path, "w") as fh:
        json.dump(tree_to_dict(tree), fh)


def tree_from_dict(data) -> BipartitionTree:
    nodes = []
    for item in sorted(data["nodes"], key=lambda d: d["id"]):
        nodes.append(
            TreeNode(
                int(item["id"]),
                tuple(int(m) for m in item["members"]),
                int(item["j"]),
                children=tuple(item["children"]) if item["children"] else None,
            )
        )
    for node in nodes:
        if node.children:
            for cid in node.children:
                nodes[cid].parent = node.id
    levels = [[0]]
    current = [nodes[0]]
    while any(node.size > 1 for node in current):
        nxt = []
        for node in current:
            if node.children is None:
                nxt.append(node)
            else:
                nxt.extend(nodes[cid] for cid in node.children)
        levels.append([node.id for node in nxt])
        current = nxt
    return BipartitionTree(int(data["kappa"]), nodes, levels)


def load_tree(path) -> BipartitionTree:
    data = _json_load(path)
    try:
        return tree_from_dict(data)
    except (KeyError, TypeError, IndexError) as exc:
        raise DataError(f"{path}: {exc}") from exc


# -- dictionaries -----------------------------------------------------------


def dump_dictionary(d: Dictionary, path) -> None:
    atoms = []
    for (j, k), block in sorted(d.blocks.items()):
        for pos, l in enumerate(block.tags):
            entry = {
                "j": j,
                "k": k,
                "l": int(l),
                "support": [int(i) for i in block.support],
                "values": [float(x) for x in block.vectors[:, pos]],
            }
            if block.eigenvalues is not None:
                entry["eigenvalue"] = float(block.eigenvalues[pos])
            atoms.append(entry)
    payload = {
        "kind": d.kind,
        "ordering": d.ordering,
        "kappa": d.kappa,
        "n": d.n,
        "tree": tree_to_dict(d.tree),
        "atoms": atoms,
    }
    if d.weights is not None:
        payload["weights"] = [float(w) for w in d.weights]
    with open(path, "w") as fh:
        json.dump(payload, fh)


def load_dictionary(path) -> Dictionary:
    data = _json_load(path)
    try:
        tree = tree_from_dict(data["tree"])
        grouped: dict[tuple, list] = {}
        for atom in data["atoms"]:
            grouped.setdefault((int(atom["j"]), int(atom["k"])), []).append(atom)
        blocks = {}
        for (j, k), atoms in grouped.items():
            atoms.sort(key=lambda a: int(a["l"]))
            support = np.asarray(atoms[0]["support"], dtype=int)
            tags = np.array([int(a["l"]) for a in atoms])
            vectors = np.column_stack(
                [np.asarray(a["values"], dtype=float) for a in atoms]
            )
            eig = None
            if all("eigenvalue" in a for a in atoms):
                eig = np.array([float(a["eigenvalue"]) for a in atoms])
            blocks[(j, k)] = Block(j, k, support, tags, vectors, eig)
        weights = data.get("weights")
        return Dictionary(
            data["kind"],
            tree,
            blocks,
            ordering=data.get("ordering", "C2F"),
            weights=None if weights is None else np.asarray(weights, dtype=float),
        )
    except (KeyError, TypeError, IndexError) as exc:
        raise DataError(f"{path}: {exc}") from exc


# -- matrices and tables ----------------------------------------------------


def dump_matrix_coo(matrix, path) -> None:
    """Coordinate text format: one "row col value" line per stored entry."""
    coo = matrix.tocoo() if sp.issparse(matrix) else sp.coo_matrix(matrix)
    with open(path, "w") as fh:
        fh.write(f"# shape {coo.shape[0]} {coo.shape[1]}\n")
        for r, c, v in sorted(zip(coo.row, coo.col, coo.data), key=lambda t: (t[0], t[1])):
            fh.write(f"{int(r)} {int(c)} {float(v)!r}\n")


def dump_matrix_csv(matrix, path) -> None:
    dense = matrix.toarray() if sp.issparse(matrix) else np.asarray(matrix)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in dense:
            writer.writerow([repr(float(x)) for x in row])


def dump_selection(selection, path, extra=None) -> None:
    payload = {
        "direction": selection.direction,
        "blocks": [list(b) for b in selection.blocks],
        "keys": [list(key) for key in selection.keys],
        "total_cost": selection.total_cost,
    }
    if extra:
        payload.update(extra)
    with open(path, "w") as fh:
        json.dump(payload, fh)


def dump_pursuit(pairs, path) -> None:
    payload = [{"j": j, "k": k, "l": l, "coefficient": c} for (j, k, l), c in pairs]
    with open(path, "w") as fh:
        json.dump(payload, fh)


def dump_coefficients_csv(table, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["j", "k", "l", "coefficient"])
        for (j, k), coefs in sorted(table.coefs.items()):
            tags = table.dictionary.block(j, k).tags
            for l, value in zip(tags, coefs):
                writer.writerow([j, k, int(l), repr(float(value))])


def dump_curves_csv(curves, path) -> None:
    """Error curves as rows of m, rel_error, method."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["m", "rel_error", "method"])
        for curve in curves:
            for m, err in enumerate(curve.errors):
                writer.writerow([m, repr(float(err)), curve.method])


def dump_kscore_csv(rows, path) -> None:
    """Score table as rows of clusters, features, method, score."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["clusters", "features", "method", "score"])
        for clusters, features, method, score in rows:
            writer.writerow([clusters, features, method, repr(float(score))])


# -- images -----------------------------------------------------------------


def load_pgm(path) -> np.ndarray:
    """Read an ASCII (P2) or binary (P5) PGM image, scaled to [0, 1]."""
    with open(path, "rb") as fh:
        data = fh.read()
    tokens = []
    pos = 0
    while len(tokens) < 4 and pos < len(data):
        # skip whitespace and comment lines
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        tokens.append(data[start:pos])
    if len(tokens) < 4 or tokens[0] not in (b"P2", b"P5"):
        raise DataError(f"{path}: not a P2/P5 PGM file")
    try:
        width, height, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    except ValueError as exc:
        raise DataError(f"{path}: bad PGM header: {exc}") from exc
    if tokens[0] == b"P2":
        try:
            values = np.array(data[pos:].split(), dtype=float)
        except ValueError as exc:
            raise DataError(f"{path}: bad P2 payload: {exc}") from exc
    else:
        pos += 1  # single whitespace after maxval
        if maxval < 256:
            values = np.frombuffer(data, dtype=np.uint8, offset=pos).astype(float)
        else:
            values = np.frombuffer(data, dtype=">u2", offset=pos).astype(float)
    if values.size < width * height:
        raise DataError(f"{path}: truncated PGM payload")
    grid = values[: width * height].reshape(height, width)
    return grid / float(maxval)
