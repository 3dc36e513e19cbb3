"""The dual Hopf algebra side: L-functionals, the convolution algebra of
functionals realized as entries of multiplicative matrix representations,
the universal r-form on words, evaluation matrices, rank machinery and dual
separation.

A MatRep assigns to every generator u^i_j a d x d matrix of scalars and
extends to words by matrix products (the unit word maps to the identity).
Its entries are honest linear functionals on the free word algebra; all
representations built here factor through the defining ideal of O(G_q), so
functional equalities certified on free words are faithful.

A Functional is a finite linear combination of (rep, row, col) entries.

The Workspace ties one FieldConfig to its R-matrix, its oracle-pinned
antipode, the corepresentation registry and all caches; it is the
per-session instance behind every operation in this module and in fodc.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from . import coordalg, linalg, rmat
from .coordalg import CoordElem, YoungWeight
from .scalar import ONE, Scalar, ZERO


class RankUnstableError(ArithmeticError):
    pass


class AntipodeFailureError(ArithmeticError):
    pass


class UnsupportedFunctionalError(ValueError):
    pass


@dataclass(frozen=True)
class Policy:
    """Degree-escalation policy for ranks and separation certificates."""

    start_degree: int = 2
    stability_window: int = 2
    d_max: int = 6
    separation_length: int = 3


# ---------------------------------------------------------------------------
# matrix representations
# ---------------------------------------------------------------------------

class MatRep:
    """Multiplicative matrix-valued map on words, given by generator values.

    gens maps (i, j) -> sparse matrix {row: {col: value}}; missing matrices
    are zero.  Values may be Scalar or CycElem.
    """

    _counter = 0

    def __init__(self, N, labels, gens, name):
        self.N = N
        self.labels = list(labels)
        self.gens = gens
        self.name = name
        self._word_cache = {}
        MatRep._counter += 1
        self.uid = MatRep._counter

    def gen_matrix(self, i, j):
        return self.gens.get((i, j), {})

    def word_matrix(self, word):
        """Value on a word as a sparse matrix (cached)."""
        if word in self._word_cache:
            return self._word_cache[word]
        if not word:
            m = linalg.mat_identity(self.labels)
        else:
            m = self.word_matrix(word[:-1])
            m = linalg.mat_mul(m, self.gen_matrix(*word[-1]))
        self._word_cache[word] = m
        return m

    def entry_on_word(self, row, col, word):
        """Single entry of the word value via row-vector chaining."""
        state = {row: ONE}
        for g in word:
            state = linalg.vec_mat(state, self.gen_matrix(*g))
            if not state:
                return ZERO
        return state.get(col, ZERO)

    def __repr__(self):
        return f"MatRep[{self.name}, dim {len(self.labels)}]"


def eps_rep(config):
    """The counit as a 1x1 representation."""
    gens = {(i, i): {0: {0: ONE}} for i in range(1, config.N + 1)}
    return MatRep(config.N, [0], gens, "eps")


def eps_zeta_rep(config, zeta):
    """The twist character: u^i_j maps to zeta * delta_ij."""
    v = zeta.value
    gens = {(i, i): {0: {0: v}} for i in range(1, config.N + 1)}
    return MatRep(config.N, [0], gens, f"eps[{zeta}]")


def lplus(config, rdata):
    """L+ of the fundamental corepresentation: values z * R^{ki}_{lj}."""
    N = config.N
    z = rdata.z
    gens = {}
    for (k, i, l, j), v in rdata.entries.items():
        gens.setdefault((k, l), {}).setdefault(i, {})[j] = z * v
    return MatRep(N, range(1, N + 1), gens, "L+")


def lminus(config, rdata):
    """L- of the fundamental corepresentation: values z^{-1} R^{-1}{}^{ik}_{jl}."""
    N = config.N
    zi = rdata.z.inverse()
    gens = {}
    for (i, k, j, l), v in rdata.inverse_entries.items():
        gens.setdefault((k, l), {}).setdefault(i, {})[j] = zi * v
    return MatRep(N, range(1, N + 1), gens, "L-")


def conv(f, g, name=None):
    """Convolution product representation: values sum_k F(u^i_k) (x) G(u^k_j).

    Entries represent all pairwise convolution products f^a_b * g^c_d with
    row (a, c) and column (b, d); multiplicativity is inherited because the
    coproduct is an algebra map.
    """
    N = f.N
    labels = [(a, c) for a in f.labels for c in g.labels]
    gens = {}
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            acc = {}
            for k in range(1, N + 1):
                fm = f.gens.get((i, k))
                gm = g.gens.get((k, j))
                if not fm or not gm:
                    continue
                for a, frow in fm.items():
                    for b, fv in frow.items():
                        for c, grow in gm.items():
                            for d, gv in grow.items():
                                key = (a, c)
                                row = acc.setdefault(key, {})
                                colk = (b, d)
                                s = row.get(colk)
                                t = fv * gv
                                if s is None:
                                    row[colk] = t
                                else:
                                    s = s + t
                                    if s.is_zero():
                                        del row[colk]
                                    else:
                                        row[colk] = s
            acc = {r: row for r, row in acc.items() if row}
            if acc:
                gens[(i, j)] = acc
    return MatRep(N, labels, gens, name or f"conv({f.name},{g.name})")


def conv_power(f, k, name=None):
    """k-fold convolution power with flat k-tuple labels."""
    N = f.N
    labels = [tuple(t) for t in product(f.labels, repeat=k)]
    gens = {}
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            acc = {}
            for middle in product(range(1, N + 1), repeat=k - 1):
                chain = []
                idx = (i,) + middle + (j,)
                ok = True
                for t in range(k):
                    m = f.gens.get((idx[t], idx[t + 1]))
                    if not m:
                        ok = False
                        break
                    chain.append(m)
                if not ok:
                    continue
                # tensor the chain
                partial = [((), ONE, ())]  # (row_prefix, value, col_prefix)
                for m in chain:
                    nxt = []
                    for rp, val, cp in partial:
                        for a, mrow in m.items():
                            for b, v in mrow.items():
                                nxt.append((rp + (a,), val * v, cp + (b,)))
                    partial = nxt
                for rp, val, cp in partial:
                    row = acc.setdefault(rp, {})
                    s = row.get(cp)
                    if s is None:
                        row[cp] = val
                    else:
                        s = s + val
                        if s.is_zero():
                            del row[cp]
                        else:
                            row[cp] = s
            acc = {r: row for r, row in acc.items() if row}
            if acc:
                gens[(i, j)] = acc
    if k == 0:
        return MatRep(N, [()], {(i, i): {(): {(): ONE}} for i in range(1, N + 1)}, name or "eps")
    return MatRep(N, labels, gens, name or f"{f.name}^*{k}")


def antipode_rep(f, config):
    """Representation whose entries are the antipodes of f's entries.

    The generator values solve the convolution-inverse condition
    sum_k S(f^i_k)(u^a_m) f^k_j(u^m_b) = delta_ij delta_ab, i.e. they are
    read off the inverse of the (d*N) x (d*N) block matrix of generator
    values; the result is transposed in the representation indices so that
    it is again a multiplicative matrix map.
    """
    N = config.N
    big = {}
    for (i, j), m in f.gens.items():
        for a, row in m.items():
            for b, v in row.items():
                big.setdefault((a, i), {})[(b, j)] = v
    labels = [(a, i) for a in f.labels for i in range(1, N + 1)]
    try:
        inv = linalg.mat_inverse(big, labels)
    except ArithmeticError as exc:
        raise AntipodeFailureError(f"generator block matrix of {f.name} is singular") from exc
    gens = {}
    for (y, i), row in inv.items():
        for (x, j), v in row.items():
            if not v.is_zero():
                gens.setdefault((i, j), {}).setdefault(x, {})[y] = v
    return MatRep(N, f.labels, gens, f"S({f.name})")


# ---------------------------------------------------------------------------
# functionals
# ---------------------------------------------------------------------------

class Functional:
    """Finite linear combination of MatRep entries: sum coeff * F[row, col]."""

    __slots__ = ("terms", "label")

    def __init__(self, terms, label=""):
        merged = {}
        for rep, row, col, coeff in terms:
            key = (rep, row, col)
            cur = merged.get(key)
            merged[key] = coeff if cur is None else cur + coeff
        self.terms = tuple(
            (rep, row, col, c) for (rep, row, col), c in merged.items() if not c.is_zero()
        )
        self.label = label

    def is_structural_zero(self):
        return not self.terms

    def __add__(self, other):
        return Functional(self.terms + other.terms, f"{self.label}+{other.label}")

    def __sub__(self, other):
        return self + other.scaled(Scalar.from_int(-1))

    def scaled(self, k):
        return Functional(
            [(rep, r, c, k * co) for rep, r, c, co in self.terms], self.label
        )

    def __neg__(self):
        return self.scaled(Scalar.from_int(-1))

    def value_at_unit(self):
        total = ZERO
        for rep, r, c, co in self.terms:
            if r == c:
                total = co + total
        return total

    def evaluate_word(self, word):
        total = ZERO
        for rep, r, c, co in self.terms:
            v = rep.entry_on_word(r, c, word)
            if not v.is_zero():
                total = co * v + total
        return total

    def evaluate(self, elem):
        """Linear evaluation on a CoordElem."""
        total = ZERO
        for w, c in elem.terms.items():
            v = self.evaluate_word(w)
            if not v.is_zero():
                total = c * v + total
        return total

    def word_values(self, N, degree):
        """Values on all words of degree <= degree, as {word: value}; words
        with value exactly zero are omitted."""
        total = {}
        groups = {}
        for rep, r, c, co in self.terms:
            groups.setdefault((rep, r), []).append((c, co))
        for (rep, r), cols in groups.items():
            for word, state in iter_word_states(rep, {r: ONE}, degree):
                acc = None
                for c, co in cols:
                    v = state.get(c)
                    if v is None:
                        continue
                    t = co * v
                    acc = t if acc is None else acc + t
                if acc is None or acc.is_zero():
                    continue
                cur = total.get(word)
                if cur is None:
                    total[word] = acc
                else:
                    cur = cur + acc
                    if cur.is_zero():
                        del total[word]
                    else:
                        total[word] = cur
        return total

    def __repr__(self):
        return f"Functional[{self.label or len(self.terms)} terms]"


def iter_word_states(rep, x0, max_deg):
    """Depth-first traversal of all words of degree <= max_deg, yielding
    (word, x0 * rep(word)) and pruning subtrees with vanished states."""
    gen_order = sorted(rep.gens)
    stack = [((), x0)]
    while stack:
        word, state = stack.pop()
        yield word, state
        if len(word) == max_deg:
            continue
        for g in reversed(gen_order):
            ns = linalg.vec_mat(state, rep.gens[g])
            if ns:
                stack.append((word + (g,), ns))


def all_words(N, degree):
    """All words of degree <= degree in deterministic (degree, lex) order."""
    gens = [(i, j) for i in range(1, N + 1) for j in range(1, N + 1)]
    out = [()]
    layer = [()]
    for _ in range(degree):
        layer = [w + (g,) for w in layer for g in gens]
        out.extend(layer)
    return out


def eps_word_values(degree, N):
    """The counit as a word-value dict (1 on words with all i = j)."""
    out = {(): ONE}
    diag = [(i, i) for i in range(1, N + 1)]
    layer = [()]
    for _ in range(degree):
        layer = [w + (g,) for w in layer for g in diag]
        for w in layer:
            out[w] = ONE
    return out


# ---------------------------------------------------------------------------
# the per-configuration workspace
# ---------------------------------------------------------------------------

class Workspace:
    """One quantum group: R-matrix, oracle-pinned antipode, corepresentation
    registry, L-functional representations and all evaluation caches."""

    def __init__(self, config, policy=None):
        self.config = config
        self.N = config.N
        self.policy = policy or Policy()
        self.rdata = rmat.build_r(config)
        self.lplus = lplus(config, self.rdata)
        self.lminus = lminus(config, self.rdata)
        self._eps = eps_rep(config)
        self._cp_plus = {}
        self._cp_minus = {}
        self._r_memo = {}
        self._rbar_memo = {}
        self._coreps = {}
        self._corep_reps = {}
        self._separators = None
        self._antipode = None
        self._s_lminus = None
        self._exterior = None
        self._minor_tables = {}
        self._projectors = None

    # -- low-level reps ------------------------------------------------------

    def eps_functional(self):
        return Functional([(self._eps, 0, 0, ONE)], "eps")

    def conv_power_plus(self, k):
        if k not in self._cp_plus:
            self._cp_plus[k] = conv_power(self.lplus, k)
        return self._cp_plus[k]

    def conv_power_minus(self, k):
        if k not in self._cp_minus:
            self._cp_minus[k] = conv_power(self.lminus, k)
        return self._cp_minus[k]

    def s_lminus(self):
        if self._s_lminus is None:
            self._s_lminus = antipode_rep(self.lminus, self.config)
        return self._s_lminus

    def lplus_entry(self, i, j):
        return Functional([(self.lplus, i, j, ONE)], f"l+[{i},{j}]")

    def lminus_entry(self, i, j):
        return Functional([(self.lminus, i, j, ONE)], f"l-[{i},{j}]")

    # -- universal r-form on words -------------------------------------------

    def _r_words(self, w1, w2):
        key = (w1, w2)
        v = self._r_memo.get(key)
        if v is not None:
            return v
        l = len(w2)
        if l == 0:
            v = ONE if all(i == j for i, j in w1) else ZERO
        else:
            rep = self.conv_power_plus(l)
            row = tuple(p[0] for p in reversed(w2))
            col = tuple(p[1] for p in reversed(w2))
            v = rep.entry_on_word(row, col, w1)
        self._r_memo[key] = v
        return v

    def _rbar_words(self, w1, w2):
        key = (w1, w2)
        v = self._rbar_memo.get(key)
        if v is not None:
            return v
        l = len(w1)
        if l == 0:
            v = ONE if all(i == j for i, j in w2) else ZERO
        else:
            rep = self.conv_power_minus(l)
            row = tuple(p[0] for p in reversed(w1))
            col = tuple(p[1] for p in reversed(w1))
            v = rep.entry_on_word(row, col, w2)
        self._rbar_memo[key] = v
        return v

    def r_form(self, a, b):
        """The universal r-form extended to word pairs by the bicharacter
        axioms (with the leg-order reversal in the second slot)."""
        total = ZERO
        for w1, c1 in a.terms.items():
            for w2, c2 in b.terms.items():
                v = self._r_words(w1, w2)
                if not v.is_zero():
                    total = total + c1 * c2 * v
        return total

    def rbar_form(self, a, b):
        """Convolution inverse of the r-form, extended from R^{-1} by the
        inverse bicharacter axioms (degree-preserving; agrees with
        r(S(a) (x) b), which is spot-checked in the tests)."""
        total = ZERO
        for w1, c1 in a.terms.items():
            for w2, c2 in b.terms.items():
                v = self._rbar_words(w1, w2)
                if not v.is_zero():
                    total = total + c1 * c2 * v
        return total

    def q_form(self, a, b):
        """q(a (x) b) = r(b1 (x) a1) r(a2 (x) b2), the factorizability form."""
        total = ZERO
        da = coordalg.coproduct(a, self.N)
        db = coordalg.coproduct(b, self.N)
        for (a1, a2), ca in da.items():
            for (b1, b2), cb in db.items():
                v1 = self._r_words(b1, a1)
                if v1.is_zero():
                    continue
                v2 = self._r_words(a2, b2)
                if v2.is_zero():
                    continue
                total = total + ca * cb * v1 * v2
        return total

    # -- dual separation ------------------------------------------------------

    def separating_reps(self, length=None):
        """All convolution words over {L+, L-} up to the policy length."""
        length = length or self.policy.separation_length
        if self._separators is None or self._separators[0] < length:
            reps = [(0, self._eps)]
            layer = [((), None)]
            for l in range(1, length + 1):
                nxt = []
                for seq, rep in layer:
                    for c in "+-":
                        base = self.lplus if c == "+" else self.lminus
                        nrep = base if rep is None else conv(rep, base)
                        nxt.append((seq + (c,), nrep))
                        reps.append((l, nrep))
                layer = nxt
            self._separators = (length, reps)
        return [rep for l, rep in self._separators[1] if l <= length]

    def separated_equal(self, a, b, length=None):
        """Decide a = b in O(G_q) by evaluating the separating family on
        a - b.  False is a certain inequality; True is certified only up to
        the returned family length."""
        length = length or self.policy.separation_length
        diff = a - b
        if diff.is_zero():
            return True, 0
        for l, rep in enumerate(self.separating_reps(length)):
            total = {}
            for w, c in diff.terms.items():
                total = linalg.mat_add(total, linalg.mat_scale(rep.word_matrix(w), c))
            if total:
                return False, l
        return True, length

    # -- antipode (oracle-pinned) ---------------------------------------------

    def antipode_table(self):
        """Generator antipode table, selected solely by the antipode axiom
        checked under dual separation."""
        if self._antipode is not None:
            return self._antipode
        cands = self._antipode_candidates()
        winners = []
        for tab in cands:
            if self._antipode_axiom_holds(tab):
                winners.append(tab)
        if not winners:
            raise AntipodeFailureError("no antipode candidate passes the axiom oracle")
        if len(winners) > 1:
            raise AntipodeFailureError("antipode candidate not unique")
        self._antipode = winners[0]
        return self._antipode

    def _antipode_candidates(self):
        N = self.N
        q = self.config.q
        if self.config.series == "A":
            rel = self.exterior_relations()
            minors = self.minor_table(N - 1)
            cands = []
            for sgn in (1, -1):
                tab = []
                for i in range(1, N + 1):
                    row = []
                    for j in range(1, N + 1):
                        rows = tuple(t for t in range(1, N + 1) if t != j)
                        cols = tuple(t for t in range(1, N + 1) if t != i)
                        coeff = (-q) ** (sgn * (i - j))
                        row.append(minors[(rows, cols)].scaled(coeff))
                    tab.append(row)
                cands.append(tab)
            return cands
        eps_i, rho = rmat._symplectic_data(N)
        prim = lambda i: N + 1 - i
        cands = []
        for sgn in (1, -1):
            tab = []
            for i in range(1, N + 1):
                row = []
                for j in range(1, N + 1):
                    coeff = q ** (sgn * (rho[i] - rho[j])) * Scalar.from_int(eps_i[i] * eps_i[j])
                    row.append(CoordElem.generator(prim(j), prim(i)).scaled(coeff))
                tab.append(row)
            cands.append(tab)
        return cands

    def _antipode_axiom_holds(self, tab):
        N = self.N
        unit = CoordElem.unit()
        zero = CoordElem()
        for i in range(1, N + 1):
            for j in range(1, N + 1):
                want = unit if i == j else zero
                left = CoordElem()
                right = CoordElem()
                for k in range(1, N + 1):
                    left = left + tab[i - 1][k - 1] * CoordElem.generator(k, j)
                    right = right + CoordElem.generator(i, k) * tab[k - 1][j - 1]
                if not self.separated_equal(left, want)[0]:
                    return False
                if not self.separated_equal(right, want)[0]:
                    return False
        return True

    def antipode(self, a):
        return coordalg.apply_antipode(a, self.antipode_table())

    # -- exterior algebra, minors, coreps --------------------------------------

    def spectral_projectors(self):
        if self._projectors is None:
            self._projectors = rmat.spectral_projectors(self.rdata)
        return self._projectors

    def exterior_relations(self):
        if self._exterior is None:
            self._exterior = coordalg.exterior_relations(
                self.rdata, self.spectral_projectors()
            )
        return self._exterior

    def minor_table(self, k):
        if k not in self._minor_tables:
            if self.config.series == "C" and k > 1:
                raise coordalg.InvalidDegreeError(
                    "C-series minors are supported for k = 1 only"
                )
            rel = self.exterior_relations() if k > 1 else None
            self._minor_tables[k] = coordalg.quantum_minors(self.N, k, rel)
        return self._minor_tables[k]

    def principal_minor(self, k):
        key = tuple(range(1, k + 1))
        return self.minor_table(k)[(key, key)]

    def corep(self, descriptor):
        """Parse a corepresentation descriptor and register the result.

        Grammar: 1 | u | uc | tensor(D,D) | dsum(D,D) | minor:k |
        proj:sym(D) | proj:anti(D)
        """
        desc = descriptor.replace(" ", "")
        if desc in self._coreps:
            return self._coreps[desc]
        cor = self._build_corep(desc)
        self._coreps[desc] = cor
        return cor

    def _build_corep(self, desc):
        N = self.N
        if desc == "1":
            return coordalg.trivial_corep()
        if desc == "u":
            return coordalg.fundamental_corep(N)
        if desc == "uc":
            cor = coordalg.contragredient(self.corep("u"), self.antipode_table())
            self._check_comatrix(cor)
            return cor
        if desc.startswith("minor:"):
            k = int(desc.split(":", 1)[1])
            if not 1 <= k <= self.config.rank:
                raise coordalg.InvalidDegreeError(
                    f"minor degree {k} out of range 1..{self.config.rank}"
                )
            cor = coordalg.minor_corep(N, k, None if k == 1 else self.exterior_relations())
            self._check_comatrix(cor)
            return cor
        for head in ("tensor(", "dsum("):
            if desc.startswith(head):
                args = _split_two(desc[len(head):-1])
                a, b = self.corep(args[0]), self.corep(args[1])
                return coordalg.tensor(a, b) if head == "tensor(" else coordalg.direct_sum(a, b)
        if desc.startswith("proj:sym(") or desc.startswith("proj:anti("):
            which = "sym" if desc.startswith("proj:sym(") else "anti"
            inner = desc[desc.index("(") + 1:-1]
            parent = self.corep(inner)
            if parent.dim != N * N:
                raise coordalg.NotInvariantError(
                    "sym/anti projections act on tensor squares of u"
                )
            projs = self.spectral_projectors()
            want = N * (N + 1) // 2 if which == "sym" else N * (N - 1) // 2
            pmat = None
            for _, p in projs:
                if rmat.mat_rank(p) == want:
                    pmat = p
                    break
            if pmat is None:
                raise coordalg.NotInvariantError("no projector of the requested rank")
            labels = [(i, j) for i in range(1, N + 1) for j in range(1, N + 1)]
            frame = YoungWeight((2,)) if which == "sym" else (
                YoungWeight((0, 1)) if self.config.rank >= 2 else None
            )
            return coordalg.projected_corep(
                parent, pmat, labels, f"proj:{which}({inner})",
                frame=frame, irreducible=(self.config.series == "A" and which == "sym") or None,
                comatrix_checker=self._check_comatrix,
            )
        raise ValueError(f"cannot parse corepresentation descriptor {desc!r}")

    def _check_comatrix(self, cor):
        """Comatrix identity for every entry, decided by dual separation on
        each tensor leg via the separating family."""
        N = self.N
        reps = self.separating_reps(2)
        for i in range(cor.dim):
            for j in range(cor.dim):
                # Delta(v^i_j) - sum_k v^i_k (x) v^k_j as {(w1, w2): coeff}
                pairs = dict(coordalg.coproduct(cor.entries[i][j], N))
                for k in range(cor.dim):
                    left, right = cor.entries[i][k], cor.entries[k][j]
                    for w1, c1 in left.terms.items():
                        for w2, c2 in right.terms.items():
                            key = (w1, w2)
                            cur = pairs.get(key, ZERO)
                            cur = cur - c1 * c2
                            if cur.is_zero():
                                pairs.pop(key, None)
                            else:
                                pairs[key] = cur
                if not pairs:
                    continue
                for rep1 in reps:
                    for rep2 in reps:
                        total = {}
                        for (w1, w2), c in pairs.items():
                            m1 = rep1.word_matrix(w1)
                            m2 = rep2.word_matrix(w2)
                            for r1, row1 in m1.items():
                                for c1_, v1 in row1.items():
                                    for r2, row2 in m2.items():
                                        for c2_, v2 in row2.items():
                                            key = ((r1, c1_), (r2, c2_))
                                            cur = total.get(key, ZERO)
                                            cur = cur + c * v1 * v2
                                            if cur.is_zero():
                                                total.pop(key, None)
                                            else:
                                                total[key] = cur
                        if total:
                            return False
        return True

    def tensor_power_corep(self, k):
        if k == 0:
            return self.corep("1")
        desc = "u"
        for _ in range(k - 1):
            desc = f"tensor(u,{desc})"
        return self.corep(desc)

    # -- L-functionals of arbitrary coreps --------------------------------------

    def lplus_corep(self, v):
        """MatRep with l+[v]^i_j = r(. (x) v^i_j)."""
        key = ("l+", v.label)
        if key in self._corep_reps:
            return self._corep_reps[key]
        N = self.N
        gens = {}
        for a in range(1, N + 1):
            for b in range(1, N + 1):
                g = CoordElem.generator(a, b)
                m = {}
                for i in range(v.dim):
                    for j in range(v.dim):
                        val = self.r_form(g, v.entries[i][j])
                        if not val.is_zero():
                            m.setdefault(i + 1, {})[j + 1] = val
                if m:
                    gens[(a, b)] = m
        rep = MatRep(N, range(1, v.dim + 1), gens, f"L+[{v.label}]")
        self._corep_reps[key] = rep
        return rep

    def lminus_corep(self, v):
        """MatRep with l-[v]^i_j = rbar(v^i_j (x) .)."""
        key = ("l-", v.label)
        if key in self._corep_reps:
            return self._corep_reps[key]
        N = self.N
        gens = {}
        for a in range(1, N + 1):
            for b in range(1, N + 1):
                g = CoordElem.generator(a, b)
                m = {}
                for i in range(v.dim):
                    for j in range(v.dim):
                        val = self.rbar_form(v.entries[i][j], g)
                        if not val.is_zero():
                            m.setdefault(i + 1, {})[j + 1] = val
                if m:
                    gens[(a, b)] = m
        rep = MatRep(N, range(1, v.dim + 1), gens, f"L-[{v.label}]")
        self._corep_reps[key] = rep
        return rep

    def mrep(self, v):
        """conv(S(L-[v]), L+[v]): houses all l(v^i_j)."""
        key = ("m", v.label)
        if key in self._corep_reps:
            return self._corep_reps[key]
        srep = antipode_rep(self.lminus_corep(v), self.config)
        rep = conv(srep, self.lplus_corep(v), name=f"M[{v.label}]")
        self._corep_reps[key] = rep
        return rep

    def l_entry(self, v, i, j):
        """l(v^i_j) = sum_k S(l-[v]^i_k) l+[v]^k_j as a Functional."""
        m = self.mrep(v)
        terms = [
            (m, (k, k), (i + 1, j + 1), ONE) for k in range(1, v.dim + 1)
        ]
        return Functional(terms, f"l({v.label}[{i + 1},{j + 1}])")

    def l_of(self, a):
        """l(a)(.) = q(. (x) a), realized over the graded tensor powers."""
        by_degree = {}
        for w, c in a.terms.items():
            by_degree.setdefault(len(w), {})[w] = c
        terms = []
        for k, words in sorted(by_degree.items()):
            if k == 0:
                for w, c in words.items():
                    terms.append((self._eps, 0, 0, c))
                continue
            v = self.tensor_power_corep(k)
            pos = _tensor_position_map(self.N, k)
            m = self.mrep(v)
            for w, c in words.items():
                i = pos[tuple(p[0] for p in w)]
                j = pos[tuple(p[1] for p in w)]
                for t in range(1, v.dim + 1):
                    terms.append((m, (t, t), (i, j), c))
        return Functional(terms, "l(elem)")

    # -- distinguished functionals ----------------------------------------------

    def tau_functional(self, weight):
        """tau(-2 lambda) = prod_k ((l+^1_1 ... l+^k_k)^2)^{m_k}."""
        seq = []
        for k, mult in enumerate(weight.m, start=1):
            seq.extend(list(range(1, k + 1)) * (2 * mult))
        if not seq:
            return self.eps_functional()
        rep = self.conv_power_plus(len(seq))
        lab = tuple(seq)
        return Functional([(rep, lab, lab, ONE)], f"tau(-2*{weight})")

    def k_functional(self, i):
        """K_i = l-^1_1 ... l-^i_i."""
        rep = self.conv_power_minus(i)
        lab = tuple(range(1, i + 1))
        return Functional([(rep, lab, lab, ONE)], f"K_{i}")

    def k_alpha_functional(self, i):
        """K_{alpha_i} = prod_j K_j^{a_ji} via antipodes for negative powers."""
        a = self.config.cartan()
        factors = []
        for j in range(1, self.config.rank + 1):
            e = a[j - 1][i - 1]
            if e == 0:
                continue
            base = self.conv_power_minus(j)
            lab = tuple(range(1, j + 1))
            if e < 0:
                base = antipode_rep(base, self.config)
                e = -e
            factors.extend([(base, lab)] * e)
        rep = None
        row = None
        for base, lab in factors:
            if rep is None:
                rep, row = base, lab
            else:
                rep = conv(rep, base)
                row = (row, lab)
        return Functional([(rep, row, row, ONE)], f"K_alpha_{i}")

    # -- adjoint action -----------------------------------------------------------

    def ad_r(self, f, x):
        """ad_R(f)x = S(f_(1)) x f_(2) for f a MatRep-housed functional."""
        if not f.terms:
            return Functional([], "ad(0)")
        freps = {rep for rep, *_ in f.terms}
        if len(freps) != 1:
            raise UnsupportedFunctionalError("ad_r needs f inside a single MatRep")
        frep = freps.pop()
        skey = ("ad-s", frep.uid)
        if skey not in self._corep_reps:
            self._corep_reps[skey] = antipode_rep(frep, self.config)
        srep = self._corep_reps[skey]
        out_terms = []
        xgroups = {}
        for xrep, xr, xc, xco in x.terms:
            xgroups.setdefault(xrep, []).append((xr, xc, xco))
        for xrep, xterms in xgroups.items():
            ckey = ("ad3", frep.uid, xrep.uid)
            if ckey not in self._corep_reps:
                self._corep_reps[ckey] = conv(srep, conv(xrep, frep))
            c3 = self._corep_reps[ckey]
            for frep_, a, b, fco in f.terms:
                for xr, xc, xco in xterms:
                    for k in frep.labels:
                        out_terms.append(
                            (c3, (k, (xr, k)), (a, (xc, b)), fco * xco)
                        )
        return Functional(out_terms, f"ad({f.label}){x.label}")

    # -- evaluation matrices, ranks, equality --------------------------------------

    def eval_rows(self, fs, degree):
        """Sparse evaluation rows {word: value} for each functional."""
        return [f.word_values(self.N, degree) for f in fs]

    def rank(self, rows, prescreen=False):
        if prescreen:
            lower = linalg.rank_modular(
                [r for r in rows if _all_scalar(r)], 9176, (1 << 61) - 1
            ) if all(_all_scalar(r) for r in rows) else None
            exact = linalg.rank(rows)
            assert lower is None or exact >= lower
            return exact
        return linalg.rank(rows)

    def stabilized_rank(self, fs, policy=None):
        """Escalate the evaluation degree until the rank is constant over
        the stability window; returns (rank, certified_degree)."""
        policy = policy or self.policy
        ranks = []
        d = policy.start_degree
        while d <= policy.d_max:
            ranks.append(self.rank(self.eval_rows(fs, d)))
            if len(ranks) >= policy.stability_window and len(
                set(ranks[-policy.stability_window:])
            ) == 1:
                return ranks[-1], d
            d += 1
        raise RankUnstableError(
            f"rank did not stabilize up to degree {policy.d_max}: {ranks}"
        )

    def functional_equal(self, f, g, degree=None):
        """Equality of functionals on all words up to the certification
        degree.  False is definitive; True certifies up to the degree."""
        degree = degree if degree is not None else self.policy.d_max
        vf = f.word_values(self.N, degree)
        vg = g.word_values(self.N, degree)
        for w in set(vf) | set(vg):
            a = vf.get(w, ZERO)
            b = vg.get(w, ZERO)
            if not _values_equal(a, b):
                return False, len(w)
        return True, degree

    def coideal_check(self, basis, degree=None):
        """Right-coideal and ad_R-invariance certificate for span(basis) + C eps.

        Checks (i) for every word pair a, b with deg a + deg b <= degree the
        functional X(. b) restricted to degree <= degree - |b| lies in the
        span of the basis and eps, and (ii) ad_R by every l+-/l- generator
        entry maps the basis into the span.  Returns (ok, degree).
        """
        degree = degree if degree is not None else self.policy.start_degree + 1
        N = self.N
        rows = self.eval_rows(basis, degree)
        eps_row = eps_word_values(degree, N)
        big = linalg.echelon(rows + [eps_row])
        # membership of truncated rows must be tested against the basis
        # restricted to the same column set
        big_by_limit = {degree: big}
        for lim in range(degree):
            trunc = [
                {w: v for w, v in r.items() if len(w) <= lim}
                for r in rows + [eps_row]
            ]
            big_by_limit[lim] = linalg.echelon(trunc)
        # shared row-state tables, bucketed by word length
        row_tables = {}

        def row_table(rep, r):
            key = (rep.uid, r)
            if key not in row_tables:
                buckets = [dict() for _ in range(degree + 1)]
                for w, state in iter_word_states(rep, {r: ONE}, degree):
                    buckets[len(w)][w] = state
                row_tables[key] = (rep, buckets)
            return row_tables[key][1]

        # column-state tables: rep(b) e_c for all words b, grown by prepending
        def col_table(rep, c, out):
            key = (rep.uid, c)
            if key not in out:
                table = {(): {c: ONE}}
                layer = [((), {c: ONE})]
                for _ in range(degree):
                    nxt = []
                    for b, vec in layer:
                        for g in sorted(rep.gens):
                            nv = linalg.mat_vec(rep.gens[g], vec)
                            if nv:
                                nb = (g,) + b
                                table[nb] = nv
                                nxt.append((nb, nv))
                    layer = nxt
                out[key] = table
            return out[key]

        col_tables = {}
        # (i) coproduct legs stay in the span
        for x in basis:
            for b in all_words(N, degree):
                if not b:
                    continue
                limit = degree - len(b)
                row = {}
                for rep, r, c, co in x.terms:
                    ctab = col_table(rep, c, col_tables)
                    y = ctab.get(b)
                    if not y:
                        continue
                    buckets = row_table(rep, r)
                    for l in range(limit + 1):
                        for w, state in buckets[l].items():
                            acc = None
                            for lbl, yv in y.items():
                                sv = state.get(lbl)
                                if sv is None:
                                    continue
                                t = sv * yv
                                acc = t if acc is None else acc + t
                            if acc is None:
                                continue
                            t = co * acc
                            cur = row.get(w)
                            cur = t if cur is None else cur + t
                            if _is_zero_val(cur):
                                row.pop(w, None)
                            else:
                                row[w] = cur
                if not linalg.in_row_space(big_by_limit[limit], row):
                    return False, degree
        # (ii) ad_R-invariance under the L-functional generator entries;
        # one DFS per (sign, x-rep, x-row) serves every generator entry and
        # every basis functional simultaneously
        xreps = {}
        for x in basis:
            for rep, r, c, co in x.terms:
                xreps.setdefault(rep, set()).add(r)
        for sign in ("+", "-"):
            frep = self.lplus if sign == "+" else self.lminus
            skey = ("ad-s", frep.uid)
            if skey not in self._corep_reps:
                self._corep_reps[skey] = antipode_rep(frep, self.config)
            srep = self._corep_reps[skey]
            c3s = {}
            tables = {}
            for xrep, xrows in xreps.items():
                ckey = ("ad3", frep.uid, xrep.uid)
                if ckey not in self._corep_reps:
                    self._corep_reps[ckey] = conv(srep, conv(xrep, frep))
                c3 = self._corep_reps[ckey]
                c3s[xrep.uid] = c3
                for xr in xrows:
                    x0 = {}
                    for k in frep.labels:
                        x0[(k, (xr, k))] = ONE
                    tables[(xrep.uid, xr)] = dict(iter_word_states(c3, x0, degree))
            for a in range(1, N + 1):
                for bcol in range(1, N + 1):
                    for x in basis:
                        row = {}
                        for xrep, xr, xc, xco in x.terms:
                            tab = tables[(xrep.uid, xr)]
                            colkey = (a, (xc, bcol))
                            for w, state in tab.items():
                                sv = state.get(colkey)
                                if sv is None:
                                    continue
                                t = xco * sv
                                cur = row.get(w)
                                cur = t if cur is None else cur + t
                                if _is_zero_val(cur):
                                    row.pop(w, None)
                                else:
                                    row[w] = cur
                        if not linalg.in_row_space(big, row):
                            return False, degree
        return True, degree

    # -- JSON export ---------------------------------------------------------------

    def export_eval_matrix(self, fs, degree):
        words = all_words(self.N, degree)
        rows = self.eval_rows(fs, degree)
        return {
            "columns": [coordalg.word_str(w) for w in words],
            "rows": [[str(r.get(w, ZERO)) for w in words] for r in rows],
        }


def _values_equal(a, b):
    d = a - b
    if isinstance(d, bool):
        return d
    return d.is_zero()


def _is_zero_val(v):
    return v.is_zero()


def _all_scalar(row):
    return all(isinstance(v, Scalar) for v in row.values())


def _tensor_position_map(N, k):
    """Multi-index -> 1-based position in the k-fold tensor power of u.

    Matches the entry layout of coordalg.tensor built as u (x) (u (x) ...).
    """
    out = {}
    for pos, multi in enumerate(product(range(1, N + 1), repeat=k)):
        out[multi] = pos + 1
    return out


def _split_two(s):
    depth = 0
    for i, ch in enumerate(s):
        if ch in "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            return s[:i], s[i + 1:]
    raise ValueError(f"expected two comma-separated descriptors in {s!r}")
