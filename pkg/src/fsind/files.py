"""Structured text formats for categories, centers, skeletons, and tables.

All formats are line-based with `[section]` headers; keys are
order-insensitive, `#` starts a comment.  Floats are written with shortest
round-tripping precision so that exporting and re-loading reproduces the
data bitwise.
"""
from __future__ import annotations

import numpy as np

from .category import FusionData
from .center import CenterData, CenterObject
from .statesum import Face, GraphSkeleton, HalfRim, Node, Rim


class FileFormatError(ValueError):
    def __init__(self, path, lineno, message):
        super().__init__(f"{path}:{lineno}: {message}")
        self.path = path
        self.lineno = lineno


def _sections(path: str) -> dict:
    out: dict = {}
    current = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("[") and line.endswith("]"):
                current = line[1:-1].strip().lower()
                out.setdefault(current, [])
                continue
            if current is None:
                raise FileFormatError(path, lineno, "content before any [section]")
            out[current].append((lineno, line))
    return out


def _fmt(z: complex) -> str:
    return f"{float(np.real(z))!r} {float(np.imag(z))!r}"


# -- category format -------------------------------------------------------------


def save_category(cat: FusionData, path: str) -> None:
    lines = ["# fusion category data", "[labels]"]
    lines.extend(cat.names)
    lines.append("[dual]")
    for i, d in enumerate(cat.dual):
        lines.append(f"{cat.names[i]} {cat.names[d]}")
    lines.append("[fusion]")
    for a in range(cat.rank):
        for b in range(cat.rank):
            for c in range(cat.rank):
                if cat.fusion[a, b, c]:
                    lines.append(f"{cat.names[a]} {cat.names[b]} {cat.names[c]} "
                                 f"{cat.fusion[a, b, c]}")
    lines.append("[F]")
    for key in sorted(cat.f_symbols):
        a, b, c, d, e, f = key
        val = cat.f_symbols[key]
        names = " ".join(cat.names[t] for t in (a, b, c, d, e, f))
        lines.append(f"{names} 0 0 {_fmt(val)}")
    lines.append("[qdim]")
    for i in range(cat.rank):
        lines.append(f"{cat.names[i]} {_fmt(cat.qdim[i])}")
    lines.append("[tolerance]")
    lines.append(repr(cat.tolerance))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_category(path: str) -> FusionData:
    sec = _sections(path)
    for required in ("labels", "dual", "fusion", "qdim"):
        if required not in sec:
            raise FileFormatError(path, 0, f"missing section [{required}]")
    names = [line for _, line in sec["labels"]]
    index = {n: i for i, n in enumerate(names)}
    rank = len(names)

    def lab(token, lineno):
        try:
            return index[token]
        except KeyError:
            raise FileFormatError(path, lineno, f"unknown label {token!r}") from None

    dual = list(range(rank))
    for lineno, line in sec["dual"]:
        parts = line.split()
        if len(parts) != 2:
            raise FileFormatError(path, lineno, "dual lines need two labels")
        dual[lab(parts[0], lineno)] = lab(parts[1], lineno)
    fusion = np.zeros((rank, rank, rank), dtype=np.int64)
    for lineno, line in sec["fusion"]:
        parts = line.split()
        if len(parts) != 4:
            raise FileFormatError(path, lineno, "fusion lines need i j k N")
        fusion[lab(parts[0], lineno), lab(parts[1], lineno),
               lab(parts[2], lineno)] = int(parts[3])
    f_symbols = {}
    for lineno, line in sec.get("f", []):
        parts = line.split()
        if len(parts) != 10:
            raise FileFormatError(
                path, lineno, "F lines need six labels, two indices, re, im")
        key = tuple(lab(t, lineno) for t in parts[:6])
        if parts[6] != "0" or parts[7] != "0":
            raise FileFormatError(path, lineno,
                                  "only multiplicity-free F data is supported")
        f_symbols[key] = float(parts[8]) + 1j * float(parts[9])
    qdim = np.ones(rank, dtype=np.complex128)
    for lineno, line in sec["qdim"]:
        parts = line.split()
        if len(parts) != 3:
            raise FileFormatError(path, lineno, "qdim lines need label re im")
        qdim[lab(parts[0], lineno)] = float(parts[1]) + 1j * float(parts[2])
    tolerance = 1e-9
    for lineno, line in sec.get("tolerance", []):
        tolerance = float(line)
    return FusionData(names, dual, fusion, f_symbols, qdim, tolerance,
                      name=path.rsplit("/", 1)[-1])


# -- center format ---------------------------------------------------------------


def _word_str(cat: FusionData, w) -> str:
    if not w:
        return "."
    return ",".join(f"{cat.names[lab]}{'+' if s > 0 else '-'}" for lab, s in w)


def _parse_word(cat: FusionData, token: str, path, lineno):
    if token == ".":
        return ()
    letters = []
    for piece in token.split(","):
        if piece[-1] not in "+-":
            raise FileFormatError(path, lineno, f"letter {piece!r} needs a sign")
        letters.append((cat.label(piece[:-1]), +1 if piece[-1] == "+" else -1))
    return tuple(letters)


def save_center(center: CenterData, path: str) -> None:
    cat = center.cat
    lines = ["# center data", "[underlying]"]
    for X in center.simples:
        for w in X.components:
            lines.append(f"{X.name} {_word_str(cat, w)}")
    lines.append("[half_braiding]")
    for X in center.simples:
        for i in sorted(X.braid):
            for k in sorted(X.braid[i]):
                mat = X.braid[i][k]
                for r in range(mat.shape[0]):
                    for c in range(mat.shape[1]):
                        if abs(mat[r, c]) == 0:
                            continue
                        lines.append(f"{X.name} {cat.names[i]} {cat.names[k]} "
                                     f"{r} {c} {_fmt(mat[r, c])}")
    lines.append("[S]")
    s = center.s_matrix()
    for i in range(len(center.simples)):
        for j in range(len(center.simples)):
            lines.append(f"{i} {j} {_fmt(s[i, j])}")
    lines.append("[T]")
    t = center.t_matrix()
    for i in range(len(center.simples)):
        lines.append(f"{i} {i} {_fmt(t[i, i])}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_center(cat: FusionData, path: str):
    """Center data plus any S/T cross-check matrices stored in the file."""
    from .diagrams import basis_keys

    sec = _sections(path)
    if "underlying" not in sec or "half_braiding" not in sec:
        raise FileFormatError(path, 0, "missing [underlying] or [half_braiding]")
    comps: dict = {}
    order = []
    for lineno, line in sec["underlying"]:
        parts = line.split()
        if len(parts) != 2:
            raise FileFormatError(path, lineno, "underlying lines need name word")
        name = parts[0]
        if name not in comps:
            comps[name] = []
            order.append(name)
        comps[name].append(_parse_word(cat, parts[1], path, lineno))
    objects = {name: CenterObject(cat, name, comps[name]) for name in order}
    raw: dict = {}
    for lineno, line in sec["half_braiding"]:
        parts = line.split()
        if len(parts) != 7:
            raise FileFormatError(
                path, lineno, "half_braiding lines need name i k row col re im")
        name, iname, kname = parts[0], parts[1], parts[2]
        if name not in objects:
            raise FileFormatError(path, lineno, f"unknown center simple {name!r}")
        key = (name, cat.label(iname), cat.label(kname))
        raw.setdefault(key, []).append(
            (int(parts[3]), int(parts[4]), float(parts[5]) + 1j * float(parts[6])))
    for (name, i, k), entries in raw.items():
        X = objects[name]
        nrow = len(basis_keys(cat, ((i, +1), (X, +1)), k))
        ncol = len(basis_keys(cat, ((X, +1), (i, +1)), k))
        mat = np.zeros((nrow, ncol), dtype=np.complex128)
        for r, c, v in entries:
            mat[r, c] = v
        X.braid.setdefault(i, {})[k] = mat
    for X in objects.values():
        X._blocks_cache.clear()
    center = CenterData(cat, [objects[n] for n in order])
    checks = {}
    for sname in ("s", "t"):
        if sname in sec and sec[sname]:
            n = len(order)
            mat = np.zeros((n, n), dtype=np.complex128)
            for lineno, line in sec[sname]:
                parts = line.split()
                mat[int(parts[0]), int(parts[1])] = \
                    float(parts[2]) + 1j * float(parts[3])
            checks[sname.upper()] = mat
    return center, checks


# -- skeleton format ---------------------------------------------------------------


def save_skeleton(skel: GraphSkeleton, path: str) -> None:
    lines = ["# graph skeleton", "[meta]", f"n_cells {skel.n_cells}", "[faces]"]
    for f in skel.faces.values():
        lines.append(f"{f.id} {f.chi} {1 if f.boundary else 0}")
    lines.append("[half_rims]")
    for hr in skel.half_rims.values():
        spec = ",".join(f"{k}:{r}:{'+' if s > 0 else '-'}" for k, r, s in hr.letters)
        lines.append(f"{hr.id} {hr.node} {spec}")
    lines.append("[rims]")
    for rim in skel.rims:
        lines.append(f"{rim.id} {rim.germ_a} {rim.germ_b}")
    lines.append("[nodes]")
    for node in skel.nodes:
        lines.append(f"{node.id} {node.kind} {','.join(node.germs)}")
    lines.append("[programs]")
    for node in skel.nodes:
        for op in node.program:
            if op[0] == "put":
                lines.append(f"{node.id} put {op[1]} {op[2]} {op[3]}")
            elif op[0] == "cap":
                lines.append(f"{node.id} cap {op[1]}")
            elif op[0] == "cross":
                lines.append(f"{node.id} cross {op[1]} "
                             f"{'+' if op[2] else '-'} {op[3]}")
            elif op[0] == "cup":
                k, r, s = op[1]
                lines.append(f"{node.id} cup {k}:{r}:{'+' if s > 0 else '-'} {op[2]}")
    lines.append("[decorations]")
    for key in skel.decorations:
        lines.append(key)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _parse_letter_spec(token: str, path, lineno):
    parts = token.split(":")
    if len(parts) != 3 or parts[0] not in ("f", "d") or parts[2] not in "+-":
        raise FileFormatError(path, lineno, f"bad letter spec {token!r}")
    return (parts[0], parts[1], +1 if parts[2] == "+" else -1)


def load_skeleton(path: str) -> GraphSkeleton:
    sec = _sections(path)
    for required in ("faces", "nodes", "programs"):
        if required not in sec:
            raise FileFormatError(path, 0, f"missing section [{required}]")
    n_cells = 0
    for lineno, line in sec.get("meta", []):
        parts = line.split()
        if parts[0] == "n_cells":
            n_cells = int(parts[1])
    faces = {}
    for lineno, line in sec["faces"]:
        parts = line.split()
        if len(parts) != 3:
            raise FileFormatError(path, lineno, "face lines need id chi boundary")
        faces[parts[0]] = Face(parts[0], int(parts[1]), parts[2] == "1")
    half_rims = {}
    for lineno, line in sec.get("half_rims", []):
        parts = line.split()
        if len(parts) != 3:
            raise FileFormatError(path, lineno, "half_rim lines need id node letters")
        letters = tuple(_parse_letter_spec(t, path, lineno)
                        for t in parts[2].split(","))
        half_rims[parts[0]] = HalfRim(parts[0], parts[1], letters)
    rims = []
    for lineno, line in sec.get("rims", []):
        parts = line.split()
        if len(parts) != 3:
            raise FileFormatError(path, lineno, "rim lines need id germ_a germ_b")
        for g in parts[1:]:
            if g not in half_rims:
                raise FileFormatError(path, lineno, f"unknown half-rim {g!r}")
        rims.append(Rim(parts[0], parts[1], parts[2]))
    programs: dict = {}
    for lineno, line in sec["programs"]:
        parts = line.split()
        nid, op = parts[0], parts[1]
        if op == "put":
            entry = ("put", int(parts[2]), int(parts[3]), int(parts[4]))
        elif op == "cap":
            entry = ("cap", int(parts[2]))
        elif op == "cross":
            entry = ("cross", int(parts[2]), parts[3] == "+", parts[4])
        elif op == "cup":
            entry = ("cup", _parse_letter_spec(parts[2], path, lineno),
                     int(parts[3]))
        else:
            raise FileFormatError(path, lineno, f"unknown program op {op!r}")
        programs.setdefault(nid, []).append(entry)
    nodes = []
    for lineno, line in sec["nodes"]:
        parts = line.split()
        if len(parts) < 2:
            raise FileFormatError(path, lineno, "node lines need id kind [germs]")
        germs = tuple(parts[2].split(",")) if len(parts) > 2 and parts[2] else ()
        nodes.append(Node(parts[0], parts[1], germs,
                          tuple(programs.get(parts[0], []))))
    decorations = {}
    for lineno, line in sec.get("decorations", []):
        decorations[line.strip()] = None
    skel = GraphSkeleton(faces, rims, half_rims, nodes, n_cells, decorations)
    skel.validate()
    return skel


# -- table export --------------------------------------------------------------------


def format_complex(z: complex) -> str:
    return f"{z.real:.12g}{z.imag:+.12g}i"


def format_table(row_names, col_names, table, corner="") -> str:
    lines = ["\t".join([corner] + list(col_names))]
    for rn, row in zip(row_names, np.asarray(table)):
        lines.append("\t".join([rn] + [format_complex(z) for z in row]))
    return "\n".join(lines) + "\n"
