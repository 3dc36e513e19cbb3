"""Bicovariant first-order differential calculi Gamma_zeta(v): quantum Lie
algebras, inner differentials, central elements, direct sums and the
classification report.

A calculus is built from a registered corepresentation v and an admissible
twist character zeta.  Its quantum Lie algebra is spanned by the
functionals X_ij = eps_zeta * l(v^i_j) - delta_ij * eps; the calculus is
inner by construction, the differential being commutation with the
biinvariant element theta = sum_i theta_ii of the free bimodule on the
m^2 left-invariant forms.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import coordalg, dual, linalg
from .coordalg import CoordElem, YoungWeight
from .cyclotomic import Zeta, all_admissible
from .dual import Functional, RankUnstableError, eps_word_values, iter_word_states
from .scalar import ONE, ZERO


class NotCentralError(ValueError):
    pass


class NotDirectError(ValueError):
    pass


# ---------------------------------------------------------------------------
# quantum Lie algebras
# ---------------------------------------------------------------------------

def lie_rows(ws, v, zeta, degree):
    """Evaluation rows of all X_ij on words of degree <= degree.

    One base-field traversal of mrep(v) serves every X_ij: the twist
    character only contributes the grading factor zeta^{deg w}, and the
    counit is subtracted on the diagonal.  Returns {(i, j): {word: value}}
    with 0-based entry indices.
    """
    m = ws.mrep(v)
    x0 = {(k, k): ONE for k in range(1, v.dim + 1)}
    eps_tab = eps_word_values(degree, ws.N)
    zpow = [zeta.power_value(t) for t in range(degree + 1)]
    rows = {(i, j): {} for i in range(v.dim) for j in range(v.dim)}
    for word, state in iter_word_states(m, x0, degree):
        zp = zpow[len(word)]
        for (a, b), val in state.items():
            rows[(a - 1, b - 1)][word] = zp * val
    for i in range(v.dim):
        row = rows[(i, i)]
        for w, e in eps_tab.items():
            cur = row.get(w)
            cur = -e if cur is None else cur - e
            if cur.is_zero():
                row.pop(w, None)
            else:
                row[w] = cur
    return rows


class QuantumLieAlgebra:
    """Span of the functionals X_ij = eps_zeta l(v^i_j) - delta_ij eps."""

    def __init__(self, ws, v, zeta):
        self.ws = ws
        self.corep = v
        self.zeta = zeta
        self.xrep = dual.conv(
            dual.eps_zeta_rep(ws.config, zeta), ws.mrep(v), name=f"X[{zeta};{v.label}]"
        )
        self.basis = []
        eps_f = ws.eps_functional()
        for i in range(v.dim):
            for j in range(v.dim):
                terms = [
                    (self.xrep, (0, (k, k)), (0, (i + 1, j + 1)), ONE)
                    for k in range(1, v.dim + 1)
                ]
                if i == j:
                    terms += [(t[0], t[1], t[2], -t[3]) for t in eps_f.terms]
                self.basis.append(Functional(terms, f"X[{i + 1},{j + 1}]"))
        self.certified_dim = None
        self.cert_degree = None

    def rows(self, degree):
        table = lie_rows(self.ws, self.corep, self.zeta, degree)
        return [table[(i, j)] for i in range(self.corep.dim) for j in range(self.corep.dim)]

    def certify_dim(self, policy=None):
        """Stabilized rank of {X_ij}; also records rank({X_ij} + {eps})."""
        if self.certified_dim is not None:
            return self.certified_dim, self.cert_degree
        policy = policy or self.ws.policy
        ranks = []
        d = policy.start_degree
        while d <= policy.d_max:
            rows = self.rows(d)
            ranks.append(linalg.rank(rows))
            if len(ranks) >= policy.stability_window and len(
                set(ranks[-policy.stability_window:])
            ) == 1:
                self.certified_dim = ranks[-1]
                self.cert_degree = d
                rows.append(eps_word_values(d, self.ws.N))
                self.rank_with_eps = linalg.rank(rows)
                return self.certified_dim, d
            d += 1
        raise RankUnstableError(
            f"quantum Lie algebra rank did not stabilize: {ranks}"
        )

    def coideal_certificate(self, degree=None):
        basis = [x for x in self.basis if x.terms]
        return self.ws.coideal_check(basis, degree)


def quantum_lie(ws, v, zeta, policy=None):
    lie = QuantumLieAlgebra(ws, v, zeta)
    lie.certify_dim(policy)
    return lie


# ---------------------------------------------------------------------------
# the calculus: bimodule data and inner differential
# ---------------------------------------------------------------------------

class Calculus:
    """Gamma_zeta(v) in free-left-module coordinates over the forms
    theta_ij; the right action of the algebra is the representation
    eps_zeta (x) S(L-[v]) (x) L+[v] and d a = theta a - a theta."""

    def __init__(self, ws, v, zeta, policy=None):
        self.ws = ws
        self.corep = v
        self.zeta = zeta
        self.lie = quantum_lie(ws, v, zeta, policy)
        self.invariant_dim = v.dim * v.dim
        self.bimodule_rep = self.lie.xrep
        self.theta_labels = [(i, i) for i in range(v.dim)]
        self._xtab = {}

    def x_values(self, degree):
        if degree not in self._xtab:
            self._xtab[degree] = lie_rows(self.ws, self.corep, self.zeta, degree)
        return self._xtab[degree]

    def differential(self, a):
        """d a as the left-coefficient vector {(i, j): CoordElem} over the
        basis forms theta_ij (0-based indices)."""
        N = self.ws.N
        m = self.corep.dim
        deg = a.degree()
        xtab = self.x_values(deg)
        out = {(i, j): CoordElem() for i in range(m) for j in range(m)}
        for (w1, w2), c in coordalg.coproduct(a, N).items():
            for key, tab in xtab.items():
                v = tab.get(w2)
                if v is None:
                    continue
                out[key] = out[key] + CoordElem.from_word(w1, c * v)
        return out

    def right_action_on_form(self, key, b):
        """theta_key * b = sum_J b_(1) F^key_J(b_(2)) theta_J."""
        N = self.ws.N
        rep = self.bimodule_rep
        out = {}
        for (b1, b2), c in coordalg.coproduct(b, N).items():
            mat = rep.word_matrix(b2)
            row = mat.get((0, (key[0] + 1, key[1] + 1)))
            if not row:
                continue
            for (_, (k, l)), v in row.items():
                tgt = (k - 1, l - 1)
                cur = out.get(tgt, CoordElem())
                out[tgt] = cur + CoordElem.from_word(b1, c * v)
        return out

    def leibniz_defect(self, a, b):
        """Coefficients of d(ab) - a db - da b; all must separate to zero."""
        dab = self.differential(a * b)
        da = self.differential(a)
        db = self.differential(b)
        out = {}
        for key in dab:
            acc = dab[key] - a * db[key]
            out[key] = acc
        for key, coeff in da.items():
            if coeff.is_zero():
                continue
            moved = self.right_action_on_form(key, b)
            for tgt, elem in moved.items():
                out[tgt] = out[tgt] - coeff * elem
        return out

    def right_ideal_member(self, a):
        """a in R_Gamma iff eps(a) = 0 and X(a) = 0 for every basis X."""
        if not a.counit().is_zero():
            return False
        deg = a.degree()
        xtab = self.x_values(deg)
        for tab in xtab.values():
            total = None
            for w, c in a.terms.items():
                v = tab.get(w)
                if v is None:
                    continue
                t = c * v
                total = t if total is None else total + t
            if total is not None and not total.is_zero():
                return False
        return True


# ---------------------------------------------------------------------------
# central elements
# ---------------------------------------------------------------------------

def d_inverse_matrix(ws, v):
    """(D^{-1})^j_i = r(S^2(v^j_n) (x) v^n_i), an exact m x m matrix."""
    m = v.dim
    tab = ws.antipode_table()
    s2 = [
        [coordalg.apply_antipode(coordalg.apply_antipode(v.entries[i][j], tab), tab)
         for j in range(m)]
        for i in range(m)
    ]
    out = []
    for j in range(m):
        row = []
        for i in range(m):
            total = ZERO
            for n in range(m):
                total = total + ws.r_form(s2[j][n], v.entries[n][i])
            row.append(total)
        out.append(row)
    return out


def central_element(ws, v, zeta):
    """c_zeta(v) = sum_ij eps_zeta l(v^i_j) (D^{-1})^j_i."""
    dinv = d_inverse_matrix(ws, v)
    xrep = dual.conv(dual.eps_zeta_rep(ws.config, zeta), ws.mrep(v))
    terms = []
    for i in range(v.dim):
        for j in range(v.dim):
            c = dinv[j][i]
            if c.is_zero():
                continue
            for k in range(1, v.dim + 1):
                terms.append((xrep, (0, (k, k)), (0, (i + 1, j + 1)), c))
    return Functional(terms, f"c[{zeta}]({v.label})")


def convolution_values(ws, f, g, degree):
    """(f * g)(w) for all words of degree <= degree, via the comatrix splits."""
    N = ws.N
    vf = f.word_values(N, degree)
    vg = g.word_values(N, degree)
    out = {}
    for w in dual.all_words(N, degree):
        total = None
        for w1, w2 in coordalg.coproduct_splits(w, N):
            a = vf.get(w1)
            if a is None:
                continue
            b = vg.get(w2)
            if b is None:
                continue
            t = a * b
            total = t if total is None else total + t
        if total is not None and not total.is_zero():
            out[w] = total
    return out


def is_central(ws, c, degree=3):
    """c commutes with every l+- generator entry on words up to degree."""
    for sign in ("+", "-"):
        base = ws.lplus if sign == "+" else ws.lminus
        for i in range(1, ws.N + 1):
            for j in range(1, ws.N + 1):
                f = Functional([(base, i, j, ONE)], f"l{sign}[{i},{j}]")
                left = convolution_values(ws, c, f, degree)
                right = convolution_values(ws, f, c, degree)
                for w in set(left) | set(right):
                    a = left.get(w, ZERO)
                    b = right.get(w, ZERO)
                    d = a - b
                    if not d.is_zero():
                        return False
    return True


def quantum_lie_from_central(ws, c, policy=None, check=True):
    """Basis of span{a -> c(ab) - eps(a) c(b) : b words}, by exact rank.

    The functionals chi_b are right translates of the central element; the
    returned list is the subset of pivot translates, MatRep-housed.
    """
    policy = policy or ws.policy
    if check and not is_central(ws, c, degree=3):
        raise NotCentralError("functional is not central")
    degree = policy.start_degree + 1
    N = ws.N
    ctab = c.word_values(N, 2 * degree)
    words = dual.all_words(N, degree)
    basis = []
    picked = []
    for b in words:
        cb = ctab.get(b, ZERO)
        row = {}
        for a in words:
            v = ctab.get(a + b)
            if v is None:
                v = ZERO
            if all(i == j for i, j in a):
                v = v - cb
            if not v.is_zero():
                row[a] = v
        if row and not linalg.in_row_space(basis, row):
            basis = linalg.echelon([r for _, r in basis] + [row])
            picked.append(b)
    out = []
    for b in picked:
        out.append(_right_translate(ws, c, b, ctab))
    return out


def _right_translate(ws, c, b, ctab):
    """chi_b = c(. b) - c(b) eps as a MatRep-housed functional."""
    terms = []
    for rep, r, col, co in c.terms:
        mat = rep.word_matrix(b)
        for s, row in mat.items():
            v = row.get(col)
            if v is not None and not v.is_zero():
                terms.append((rep, r, s, co * v))
    f = Functional(terms, f"chi[{coordalg.word_str(b)}]")
    cb = ctab.get(b, ZERO)
    if not cb.is_zero():
        f = f - ws.eps_functional().scaled(cb)
    return f


# ---------------------------------------------------------------------------
# direct sums and the tensor identity
# ---------------------------------------------------------------------------

@dataclass
class DirectSumCertificate:
    dims: list
    total: int
    degree: int
    direct: bool


def direct_sum_calculi(cals, degree=None):
    """Combined quantum Lie algebra with the independence certificate
    rank(union) = sum of ranks; raises NotDirectError on deficiency."""
    if len(cals) < 2:
        raise ValueError("direct sum needs at least two calculi")
    ws = cals[0].ws
    if any(c.ws.config != ws.config for c in cals):
        raise ValueError("calculi live over different configurations")
    degree = degree or max(c.lie.cert_degree for c in cals)
    dims = []
    rows = []
    for c in cals:
        r = [row for row in c.lie.rows(degree) if row]
        dims.append(linalg.rank(r))
        rows.extend(r)
    total = linalg.rank(rows)
    cert = DirectSumCertificate(dims, total, degree, total == sum(dims))
    if not cert.direct:
        raise NotDirectError(
            f"components overlap: rank(union) = {total} < {sum(dims)}"
        )
    return cert


def tensor_identity_check(ws, v, w, degree=None):
    """Span equality of {l((v (x) w)-entries)} and {l(v)-entries times
    l(w)-entries}, certified by mutual rank containment."""
    degree = degree or (ws.policy.start_degree + 1)
    vw = coordalg.tensor(v, w)
    mvw = ws.mrep(vw)
    x0 = {(k, k): ONE for k in range(1, vw.dim + 1)}
    rows_a = _state_rows(mvw, x0, vw.dim, degree)
    prod = dual.conv(ws.mrep(v), ws.mrep(w))
    x0p = {}
    for k in range(1, v.dim + 1):
        for t in range(1, w.dim + 1):
            x0p[((k, k), (t, t))] = ONE
    rows_b = _state_rows(prod, x0p, v.dim * w.dim, degree)
    ra = linalg.rank(rows_a)
    rb = linalg.rank(rows_b)
    rab = linalg.rank(rows_a + rows_b)
    return ra == rb == rab, degree


def _state_rows(rep, x0, dim, degree):
    cols = {}
    for word, state in iter_word_states(rep, x0, degree):
        for lbl, val in state.items():
            cols.setdefault(lbl, {})[word] = val
    return [row for row in cols.values() if row]


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

@dataclass
class Component:
    zeta: Zeta
    frame: YoungWeight
    dim: int
    cert_degree: int


@dataclass
class ClassificationReport:
    descriptor: str
    components: list
    total_dim: int
    residual_rank: int
    cert_degree: int
    central_label: str = ""
    coideal_ok: bool = True

    def to_json(self):
        return json.dumps(
            {
                "input": self.descriptor,
                "components": [
                    {
                        "zeta": str(c.zeta),
                        "frame": str(c.frame),
                        "dim": c.dim,
                        "cert_degree": c.cert_degree,
                    }
                    for c in self.components
                ],
                "total_dim": self.total_dim,
                "residual_rank": self.residual_rank,
                "cert_degree": self.cert_degree,
                "central_element": self.central_label,
                "coideal_ok": self.coideal_ok,
            },
            sort_keys=True,
        )


def candidate_library(ws, frame_bound=2):
    """Candidate irreducible corepresentations by Young frame, realizable
    from the registry: fundamental minors and the symmetric square."""
    n = ws.config.rank
    out = []
    out.append((YoungWeight(()), "1"))
    for k in range(1, n + 1):
        if ws.config.series == "C" and k > 1:
            break
        frame = YoungWeight(tuple(0 if t != k - 1 else 1 for t in range(k)))
        if sum((t + 1) * m for t, m in enumerate(frame.m)) <= frame_bound:
            out.append((frame, "u" if k == 1 else f"minor:{k}"))
    if frame_bound >= 2 and ws.config.series == "A":
        out.append((YoungWeight((2,)), "proj:sym(tensor(u,u))"))
    return out


def classify(ws, rows, descriptor="", policy=None, frame_bound=2, basis=None):
    """Greedy matching of a quantum Lie algebra span against the candidate
    component library; reports leftover rank when the library is too small.
    """
    policy = policy or ws.policy
    degree = policy.start_degree + 1
    rows = [r for r in rows if r]
    coideal_ok = True
    if basis:
        coideal_ok, _ = ws.coideal_check([x for x in basis if x.terms], degree)
    big = linalg.echelon(rows)
    total = len(big)
    candidates = []
    for zeta in all_admissible(ws.config):
        for frame, desc in candidate_library(ws, frame_bound):
            if zeta.is_one() and frame.trivial:
                continue
            v = ws.corep(desc)
            candidates.append((v.dim * v.dim, (zeta.order, zeta.index), frame, zeta, v))
    candidates.sort(key=lambda t: (-t[0], t[1], t[2].m))
    found = []
    found_rows = []
    found_echelon = []
    for dim2, _, frame, zeta, v in candidates:
        cand_rows = [r for r in lie_rows_list(ws, v, zeta, degree) if r]
        if not all(linalg.in_row_space(big, r) for r in cand_rows):
            continue
        merged = linalg.echelon([r for _, r in found_echelon] + cand_rows)
        if len(merged) != len(found_echelon) + dim2:
            continue
        found_echelon = merged
        found.append(Component(zeta, frame, dim2, degree))
    residual = total - len(found_echelon)
    return ClassificationReport(
        descriptor, found, total, residual, degree, coideal_ok=coideal_ok
    )


def lie_rows_list(ws, v, zeta, degree):
    table = lie_rows(ws, v, zeta, degree)
    return [table[(i, j)] for i in range(v.dim) for j in range(v.dim)]
