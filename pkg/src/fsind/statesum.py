"""Free-boundary Turaev-Viro state sum over combinatorial graph skeleta.

A skeleton records faces, rims (pairs of half-rims), and nodes whose link
diagrams are explicit slice programs over the incident half-rims.  The
evaluator sums over colorings of the faces by simples, pruning colorings
that force a zero-dimensional half-rim space, contracts the node tensors
along the rims through dual bases, weights each coloring by the product of
quantum dimensions, and scales by the inverse global dimension per 3-cell.

The built-in family is the solid torus carrying one interior loop labeled
in the center and n boundary lines with a cyclic shift; its combinatorics
were reconstructed from the drawn skeleton: two horizontal half-disks A and
B meeting along a diameter, a vertical sheet through the core split by the
interior loop into faces C and D, and a boundary grid of n + 4 faces cut by
the boundary lines.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .category import FusionData, dual_word
from .center import CenterObject
from . import diagrams as dg
from .diagrams import DiagState, cap, cross, cup, dual_basis, hom_basis, \
    insert_vector_rotated

# Letter spec in half-rim words and programs: ("f", face_id, sign) for a
# colored face strand, ("d", key, sign) for a decoration strand.
LetterSpec = tuple

# Handedness of the interior-switch crossing; fixed by the Prop. 4.1
# calibration against the rotation-trace indicators.
CROSSING_POSITIVE = True


@dataclass
class Face:
    id: str
    chi: int = 1
    boundary: bool = False


@dataclass
class HalfRim:
    id: str
    node: str
    letters: tuple  # tuple of LetterSpec


@dataclass
class Rim:
    id: str
    germ_a: str
    germ_b: str


@dataclass
class Node:
    id: str
    kind: str  # "vertex" | "switch"
    germs: tuple  # half-rim ids in slot order
    program: tuple  # ops: ("put", slot, pos, rot) ("cap", pos)
    #                      ("cross", pos, positive, braiding) ("cup", spec, pos)


@dataclass
class GraphSkeleton:
    faces: dict
    rims: list
    half_rims: dict
    nodes: list
    n_cells: int
    decorations: dict = field(default_factory=dict)

    def face_ids(self):
        return list(self.faces)

    def resolve_letter(self, spec: LetterSpec, coloring: dict):
        kind, ref, sign = spec
        if kind == "f":
            return (coloring[ref], sign)
        if kind == "d":
            obj = self.decorations[ref]
            if obj is None:
                raise ValueError(f"decoration {ref!r} is unset")
            return (obj, sign)
        raise ValueError(f"bad letter spec {spec!r}")

    def germ_word(self, germ_id: str, coloring: dict):
        return tuple(self.resolve_letter(s, coloring)
                     for s in self.half_rims[germ_id].letters)

    def validate(self) -> None:
        """Structural checks: rim duality and program well-formedness."""
        seen = set()
        for rim in self.rims:
            a = self.half_rims[rim.germ_a]
            b = self.half_rims[rim.germ_b]
            rev = tuple((k, r, -s) for k, r, s in reversed(b.letters))
            if a.letters != rev:
                raise AssertionError(
                    f"rim {rim.id}: half-rim words are not reversal-dual")
            seen.update({rim.germ_a, rim.germ_b})
        owned = set()
        for node in self.nodes:
            for g in node.germs:
                if g in owned:
                    raise AssertionError(f"half-rim {g} referenced twice")
                owned.add(g)
                if self.half_rims[g].node != node.id:
                    raise AssertionError(f"half-rim {g} owner mismatch")
        if seen != owned:
            raise AssertionError("rims and node slots do not match up")


def half_rim_space(cat: FusionData, skeleton: GraphSkeleton, coloring: dict,
                   germ_id: str):
    """The word whose hom-from-unit space is attached to the half-rim."""
    return skeleton.germ_word(germ_id, coloring)


def dim_of_coloring(cat: FusionData, skeleton: GraphSkeleton,
                    coloring: dict) -> complex:
    out = 1.0 + 0.0j
    for fid, face in skeleton.faces.items():
        out *= complex(cat.qdim[coloring[fid]]) ** face.chi
    return complex(out)


def _run_program(cat: FusionData, skeleton: GraphSkeleton, node: Node,
                 coloring: dict, slot_vectors) -> complex:
    st = DiagState(cat, (), 0, {((), (0,)): 1.0 + 0.0j})
    for op in node.program:
        if op[0] == "put":
            _, slot, pos, rot = op
            st = insert_vector_rotated(st, slot_vectors[slot], pos, rot)
        elif op[0] == "cap":
            st = cap(st, op[1])
        elif op[0] == "cross":
            st = cross(st, op[1], op[2], op[3])
        elif op[0] == "cup":
            st = cup(st, skeleton.resolve_letter(op[1], coloring), op[2])
        else:
            raise ValueError(f"unknown node op {op[0]!r}")
    return st.scalar()


def vertex_tensor(cat: FusionData, skeleton: GraphSkeleton, coloring: dict,
                  node: Node, germ_vectors: dict) -> np.ndarray:
    """Multilinear functional of the node on its half-rim spaces."""
    vec_lists = [germ_vectors[g] for g in node.germs]
    dims = [len(v) for v in vec_lists]
    out = np.zeros(dims if dims else (1,), dtype=np.complex128)
    if 0 in dims:
        return out
    for combo in itertools.product(*(range(d) for d in dims)):
        slot_vectors = [vec_lists[t][combo[t]] for t in range(len(dims))]
        out[combo if dims else 0] = _run_program(
            cat, skeleton, node, coloring, slot_vectors)
    return out


def admissible_colorings(cat: FusionData, skeleton: GraphSkeleton):
    """Backtracking enumeration; prunes zero-dimensional half-rim spaces."""
    face_ids = list(skeleton.faces)
    germs = list(skeleton.half_rims.values())
    needs = {}
    for hr in germs:
        req = {ref for k, ref, s in hr.letters if k == "f"}
        needs[hr.id] = req
    order = []
    remaining = set(face_ids)
    assigned: list = []
    while remaining:
        best = max(remaining, key=lambda f: sum(
            1 for hr in germs if f in needs[hr.id]
            and needs[hr.id] <= (set(assigned) | {f})))
        order.append(best)
        assigned.append(best)
        remaining.remove(best)
    check_after = {f: [] for f in face_ids}
    for hr in germs:
        if not needs[hr.id]:
            continue
        last = max(needs[hr.id], key=order.index)
        check_after[last].append(hr)

    coloring: dict = {}

    def rec(idx):
        if idx == len(order):
            yield dict(coloring)
            return
        fid = order[idx]
        for col in range(cat.rank):
            coloring[fid] = col
            ok = True
            for hr in check_after[fid]:
                word = skeleton.germ_word(hr.id, coloring)
                if dg.hom_dim(cat, word) == 0:
                    ok = False
                    break
            if ok:
                yield from rec(idx + 1)
        coloring.pop(fid, None)

    yield from rec(0)


def evaluate(cat: FusionData, skeleton: GraphSkeleton, center=None,
             trace_log=None) -> complex:
    """The state sum over admissible colorings."""
    skeleton.validate()
    total = 0.0 + 0.0j
    cache: dict = {}
    for coloring in admissible_colorings(cat, skeleton):
        term = _coloring_value(cat, skeleton, coloring, cache)
        if term is None:
            continue
        weight = dim_of_coloring(cat, skeleton, coloring)
        total += weight * term
        if trace_log is not None:
            trace_log.append((dict(coloring), weight, term))
    return complex(total / cat.global_dim() ** skeleton.n_cells)


def node_face_refs(skeleton: GraphSkeleton, node: Node) -> set:
    refs = {r for g in node.germs
            for k, r, s in skeleton.half_rims[g].letters if k == "f"}
    for op in node.program:
        if op[0] == "cup" and op[1][0] == "f":
            refs.add(op[1][1])
    return refs


def _coloring_value(cat, skeleton, coloring, cache):
    # bases and duals per rim; feed primal germs the basis, dual germs the dual
    germ_vectors: dict = {}
    for rim in skeleton.rims:
        word_a = skeleton.germ_word(rim.germ_a, coloring)
        basis = hom_basis(cat, word_a)
        if not basis:
            return None
        germ_vectors[rim.germ_a] = basis
        germ_vectors[rim.germ_b] = dual_basis(cat, basis)
    # contract node tensors along shared rim axes
    rim_of_germ = {}
    for rim in skeleton.rims:
        rim_of_germ[rim.germ_a] = rim.id
        rim_of_germ[rim.germ_b] = rim.id
    acc = None
    acc_axes: list = []
    for node in skeleton.nodes:
        key = (node.id, tuple(sorted(
            (ref, coloring[ref]) for ref in node_face_refs(skeleton, node))))
        tensor = cache.get(key)
        if tensor is None:
            tensor = vertex_tensor(cat, skeleton, coloring, node, germ_vectors)
            cache[key] = tensor
        axes = [rim_of_germ[g] for g in node.germs]
        tensor, axes = _self_trace(tensor, axes)
        if acc is None:
            acc, acc_axes = tensor, list(axes)
        else:
            shared = [ax for ax in axes if ax in acc_axes]
            a_idx = [acc_axes.index(ax) for ax in shared]
            b_idx = [axes.index(ax) for ax in shared]
            acc = np.tensordot(acc, tensor, axes=(a_idx, b_idx))
            acc_axes = [ax for ax in acc_axes if ax not in shared] + \
                       [ax for ax in axes if ax not in shared]
        acc, acc_axes = _self_trace(acc, acc_axes)
    if acc_axes:
        raise AssertionError("dangling rim axes after contraction")
    return complex(acc)


def _self_trace(tensor, axes):
    """Contract axis pairs carrying the same rim id within one tensor."""
    axes = list(axes)
    while True:
        dup = None
        for i, ax in enumerate(axes):
            j = axes.index(ax)
            if j != i:
                dup = (j, i)
                break
        if dup is None:
            return tensor, axes
        j, i = dup
        tensor = np.trace(tensor, axis1=j, axis2=i)
        axes = [ax for t, ax in enumerate(axes) if t not in (i, j)]


# -- built-in skeleta ----------------------------------------------------------


def sphere_skeleton() -> GraphSkeleton:
    """One-vertex spine of the 3-sphere: a single disk face on a 2-sphere."""
    faces = {"F": Face("F", chi=1, boundary=False)}
    node = Node("v", "vertex", (), (("cup", ("f", "F", +1), 0), ("cap", 0)))
    return GraphSkeleton(faces, [], {}, [node], n_cells=2, decorations={})


def _torus_slots(n: int):
    """Per-node face slots of the solid-torus skeleton, r = 1."""
    if n < 1:
        raise ValueError("torus skeleton needs n >= 1")
    M = [f"M{i}" for i in range(1, n + 1)]
    m1slot = "M1" if n >= 2 else "Nn1"
    mn1slot = f"M{n-1}" if n >= 2 else "J1"

    def aw(i):
        if i == 1:
            return "J1" if n >= 2 else "Nn"
        return M[i - 2] if i <= n - 1 else "Nn"

    def ae(i):
        return M[i - 1]

    def bw(i):
        return M[i - 1]

    def be(i):
        if i <= n - 2:
            return M[i]
        return "Nn1" if i == n - 1 else "Jn"

    def interior(i):
        return "A" if i <= n - 1 else "B"

    return {"M": M, "m1slot": m1slot, "mn1slot": mn1slot, "aw": aw,
            "ae": ae, "bw": bw, "be": be, "interior": interior,
            "mn": M[-1]}


def torus_skeleton(n: int, r: int = 1) -> GraphSkeleton:
    """Solid-torus graph skeleton with n boundary lines shifted by r.

    r = 1 follows the drawn skeleton (n+5 nodes, n+8 faces, two 3-cells);
    r = 0 is the straight-line variant used for cross-checks.  Other shifts
    are not generated.
    """
    if r == 1:
        return _torus_skeleton_r1(n)
    if r == 0:
        return _torus_skeleton_r0(n)
    raise ValueError(f"unsupported torus skeleton (n, r) = ({n}, {r})")


def _f(ref, sign):
    return ("f", ref, sign)


def _d(ref, sign):
    return ("d", ref, sign)


def _mk_half_rims(node_words):
    half_rims = {}
    nodes_germs = {}
    for node_id, slots in node_words.items():
        ids = []
        for slot_name, letters in slots:
            gid = f"{node_id}.{slot_name}"
            half_rims[gid] = HalfRim(gid, node_id, tuple(letters))
            ids.append(gid)
        nodes_germs[node_id] = tuple(ids)
    return half_rims, nodes_germs


_U_PROGRAM = (
    ("put", 0, 0, 0), ("put", 1, 3, 0), ("put", 2, 5, 1), ("put", 3, 9, 0),
    ("cap", 2), ("cap", 2), ("cap", 1), ("cap", 2), ("cap", 1), ("cap", 0),
)

_VW_PROGRAM = (
    ("put", 0, 0, 1), ("put", 1, 3, 2), ("put", 2, 5, 2), ("put", 3, 9, 2),
    ("cap", 2), ("cap", 2), ("cap", 1), ("cap", 2), ("cap", 1), ("cap", 0),
)

_XY_PROGRAM = (
    ("put", 0, 0, 1), ("put", 1, 3, 2), ("put", 2, 5, None), ("put", 3, 10, 2),
    ("put", 4, 13, 1),
    ("cap", 2), ("cap", 2), ("cap", 1), ("cap", 3), ("cap", 2), ("cap", 2),
    ("cap", 1), ("cap", 0),
)


def _xy_program(rot_mid: int):
    ops = []
    for op in _XY_PROGRAM:
        if op[0] == "put" and op[3] is None:
            ops.append(("put", op[1], op[2], rot_mid))
        else:
            ops.append(op)
    return tuple(ops)


_A_PROGRAM = (
    ("put", 0, 0, 3), ("put", 1, 4, 2), ("cap", 3),
    ("put", 2, 3, 0), ("cap", 2), ("cap", 3),
    ("cross", 1, CROSSING_POSITIVE, "R"),
    ("cap", 2), ("put", 3, 3, 0), ("cap", 2), ("cap", 1), ("cap", 0),
)


def _torus_skeleton_r1(n: int) -> GraphSkeleton:
    s = _torus_slots(n)
    face_ids = ["A", "B", "C", "D", "J1", "Jn", "Nn1", "Nn"] + s["M"]
    faces = {f: Face(f, 1, f not in ("A", "B", "C", "D")) for f in face_ids}
    mn = s["mn"]

    node_words = {}
    # interior switch on the center-labeled loop
    node_words["a"] = [
        ("d2", [_f("A", +1), _f("D", -1), _f("B", -1), _f("D", +1)]),
        ("d1", [_f("A", -1), _f("C", -1), _f("B", +1), _f("C", +1)]),
        ("xu", [_f("D", +1), _d("X", -1), _f("C", -1)]),
        ("xd", [_f("C", +1), _d("X", +1), _f("D", -1)]),
    ]
    # boundary switches on the n lines
    for i in range(1, n + 1):
        node_words[f"u{i}"] = [
            ("w", [_f(s["interior"](i), +1), _f(s["aw"](i), +1),
                   _f(s["bw"](i), -1)]),
            ("t", [_f(s["bw"](i), +1), _d("V", -1), _f(s["be"](i), -1)]),
            ("u", [_f(s["ae"](i), +1), _d("V", +1), _f(s["aw"](i), -1)]),
            ("e", [_f(s["be"](i), +1), _f(s["ae"](i), -1),
                   _f(s["interior"](i), -1)]),
        ]
    node_words["v"] = [
        ("gt", [_f("J1", +1), _d("V", -1), _f(s["m1slot"], -1)]),
        ("ed", [_f("C", -1), _f(mn, +1), _f("J1", -1)]),
        ("eu", [_f(s["m1slot"], +1), _f("Jn", -1), _f("C", +1)]),
        ("ga", [_f("Jn", +1), _d("V", +1), _f(mn, -1)]),
    ]
    node_words["w"] = [
        ("ht", [_f("Nn", +1), _d("V", -1), _f(mn, -1)]),
        ("fd", [_f("D", +1), _f(s["mn1slot"], +1), _f("Nn", -1)]),
        ("fu", [_f(mn, +1), _f("Nn1", -1), _f("D", -1)]),
        ("ha", [_f("Nn1", +1), _d("V", +1), _f(s["mn1slot"], -1)]),
    ]
    node_words["x"] = [
        ("e", [_f(s["m1slot"], +1), _f("J1", -1), _f("A", -1)]),
        ("d", [_f("C", -1), _f("Jn", +1), _f(s["m1slot"], -1)]),
        ("r1", [_f("C", -1), _f("B", -1), _f("C", +1), _f("A", +1)]),
        ("wst", [_f("B", +1), _f(mn, +1), _f("Jn", -1)]),
        ("up", [_f("J1", +1), _f(mn, -1), _f("C", +1)]),
    ]
    node_words["y"] = [
        ("e", [_f(mn, +1), _f("Nn", -1), _f("B", -1)]),
        ("d", [_f("D", +1), _f("Nn1", +1), _f(mn, -1)]),
        ("p1", [_f("D", -1), _f("B", +1), _f("D", +1), _f("A", -1)]),
        ("wst", [_f("A", +1), _f(s["mn1slot"], +1), _f("Nn1", -1)]),
        ("up", [_f("Nn", +1), _f(s["mn1slot"], -1), _f("D", -1)]),
    ]

    half_rims, nodes_germs = _mk_half_rims(node_words)

    nodes = [Node("a", "switch", nodes_germs["a"], _A_PROGRAM)]
    for i in range(1, n + 1):
        nodes.append(Node(f"u{i}", "switch", nodes_germs[f"u{i}"], _U_PROGRAM))
    nodes.append(Node("v", "switch", nodes_germs["v"], _VW_PROGRAM))
    nodes.append(Node("w", "switch", nodes_germs["w"], _VW_PROGRAM))
    nodes.append(Node("x", "vertex", nodes_germs["x"], _xy_program(2)))
    nodes.append(Node("y", "vertex", nodes_germs["y"], _xy_program(0)))

    rims = [
        Rim("d1", "a.d1", "x.r1"),
        Rim("d2", "a.d2", "y.p1"),
        Rim("X", "a.xu", "a.xd"),
        Rim("lp_xv", "x.up", "v.ed"),
        Rim("lp_vx", "v.eu", "x.d"),
        Rim("lq_yw", "y.up", "w.fd"),
        Rim("lq_wy", "w.fu", "y.d"),
    ]
    # the boundary circle at the identified disk
    if n >= 2:
        rims.append(Rim("h_x_u1", "x.e", "u1.w"))
        for i in range(1, n - 1):
            rims.append(Rim(f"h_u{i}_u{i+1}", f"u{i}.e", f"u{i+1}.w"))
        rims.append(Rim(f"h_u{n-1}_y", f"u{n-1}.e", "y.wst"))
        rims.append(Rim(f"h_y_u{n}", "y.e", f"u{n}.w"))
        rims.append(Rim(f"h_u{n}_x", f"u{n}.e", "x.wst"))
    else:
        rims.append(Rim("h_x_y", "x.e", "y.wst"))
        rims.append(Rim("h_y_u1", "y.e", "u1.w"))
        rims.append(Rim("h_u1_x", "u1.e", "x.wst"))
    # the boundary lines, shifted by one position per revolution
    if n >= 2:
        rims.append(Rim("s1", "u1.u", "v.gt"))
        rims.append(Rim("t1", "v.ga", f"u{n}.t"))
        for i in range(2, n):
            rims.append(Rim(f"s{i}", f"u{i}.u", f"u{i-1}.t"))
        rims.append(Rim(f"s{n}", f"u{n}.u", "w.ht"))
        rims.append(Rim("tn", "w.ha", f"u{n-1}.t"))
    else:
        rims.append(Rim("s1", "u1.u", "w.ht"))
        rims.append(Rim("wv", "w.ha", "v.gt"))
        rims.append(Rim("t1", "v.ga", "u1.t"))

    skel = GraphSkeleton(faces, rims, half_rims, nodes, n_cells=2,
                         decorations={"X": None, "V": None})
    skel.validate()
    return skel


def _torus_skeleton_r0(n: int) -> GraphSkeleton:
    """Straight boundary lines; same local templates, simpler grid."""
    P = [f"P{i}" for i in range(n)]   # R1 strips, P0 west of line 1
    Q = ["Q0", "Q1"]                  # R2 strips, Q0 east of l_q
    face_ids = ["A", "B", "C", "D"] + P + Q
    faces = {f: Face(f, 1, f not in ("A", "B", "C", "D")) for f in face_ids}

    def interior(i):
        return "A" if i <= n - 1 else "B"

    def west(i):
        return P[i - 1] if i <= n - 1 else "Q0"

    def east(i):
        if i <= n - 2:
            return P[i]
        return P[n - 1] if i == n - 1 else "Q1"

    node_words = {}
    node_words["a"] = [
        ("d2", [_f("A", +1), _f("D", -1), _f("B", -1), _f("D", +1)]),
        ("d1", [_f("A", -1), _f("C", -1), _f("B", +1), _f("C", +1)]),
        ("xu", [_f("D", +1), _d("X", -1), _f("C", -1)]),
        ("xd", [_f("C", +1), _d("X", +1), _f("D", -1)]),
    ]
    for i in range(1, n + 1):
        wf, ef, itf = west(i), east(i), interior(i)
        node_words[f"u{i}"] = [
            ("w", [_f(itf, +1), _f(wf, +1), _f(wf, -1)]),
            ("t", [_f(wf, +1), _d("V", -1), _f(ef, -1)]),
            ("u", [_f(ef, +1), _d("V", +1), _f(wf, -1)]),
            ("e", [_f(ef, +1), _f(ef, -1), _f(itf, -1)]),
        ]
    # P0 plays the roles east of l_p; Q1 west of it (and mirrored at l_q)
    node_words["x"] = [
        ("e", [_f(P[0], +1), _f(P[0], -1), _f("A", -1)]),
        ("d", [_f("C", -1), _f("Q1", +1), _f(P[0], -1)]),
        ("r1", [_f("C", -1), _f("B", -1), _f("C", +1), _f("A", +1)]),
        ("wst", [_f("B", +1), _f("Q1", +1), _f("Q1", -1)]),
        ("up", [_f(P[0], +1), _f("Q1", -1), _f("C", +1)]),
    ]
    node_words["y"] = [
        ("e", [_f("Q0", +1), _f("Q0", -1), _f("B", -1)]),
        ("d", [_f("D", +1), _f(P[n - 1], +1), _f("Q0", -1)]),
        ("p1", [_f("D", -1), _f("B", +1), _f("D", +1), _f("A", -1)]),
        ("wst", [_f("A", +1), _f(P[n - 1], +1), _f(P[n - 1], -1)]),
        ("up", [_f("Q0", +1), _f(P[n - 1], -1), _f("D", -1)]),
    ]

    half_rims, nodes_germs = _mk_half_rims(node_words)
    nodes = [Node("a", "switch", nodes_germs["a"], _A_PROGRAM)]
    for i in range(1, n + 1):
        nodes.append(Node(f"u{i}", "switch", nodes_germs[f"u{i}"], _U_PROGRAM))
    nodes.append(Node("x", "vertex", nodes_germs["x"], _xy_program(2)))
    nodes.append(Node("y", "vertex", nodes_germs["y"], _xy_program(0)))

    rims = [
        Rim("d1", "a.d1", "x.r1"),
        Rim("d2", "a.d2", "y.p1"),
        Rim("X", "a.xu", "a.xd"),
        Rim("lp", "x.up", "x.d"),
        Rim("lq", "y.up", "y.d"),
    ]
    if n >= 2:
        rims.append(Rim("h_x_u1", "x.e", "u1.w"))
        for i in range(1, n - 1):
            rims.append(Rim(f"h_u{i}_u{i+1}", f"u{i}.e", f"u{i+1}.w"))
        rims.append(Rim(f"h_u{n-1}_y", f"u{n-1}.e", "y.wst"))
        rims.append(Rim(f"h_y_u{n}", "y.e", f"u{n}.w"))
        rims.append(Rim(f"h_u{n}_x", f"u{n}.e", "x.wst"))
    else:
        rims.append(Rim("h_x_y", "x.e", "y.wst"))
        rims.append(Rim("h_y_u1", "y.e", "u1.w"))
        rims.append(Rim("h_u1_x", "u1.e", "x.wst"))
    for i in range(1, n + 1):
        rims.append(Rim(f"s{i}", f"u{i}.u", f"u{i}.t"))

    skel = GraphSkeleton(faces, rims, half_rims, nodes, n_cells=2,
                         decorations={"X": None, "V": None})
    return skel
