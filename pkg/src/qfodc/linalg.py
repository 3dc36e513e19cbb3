"""Exact sparse linear algebra over Q(p) and its cyclotomic extensions.

Rows and matrices are sparse dicts whose values are field elements (Scalar
or CycElem); the code only relies on +, -, *, .inverse() and .is_zero(), so
the same elimination routines serve both ground fields.  Matrices are
row-major dicts {row_label: {col_label: value}} with arbitrary hashable,
mutually comparable labels.
"""

from __future__ import annotations

from .scalar import ONE, Scalar


def _weight(v):
    """Crude size measure used to pick well-conditioned pivots."""
    if isinstance(v, Scalar):
        return len(v.num) + len(v.den)
    return v.complexity()


def row_sub_scaled(row, coeff, other):
    """row - coeff * other, dropping exact zeros."""
    out = dict(row)
    for c, v in other.items():
        s = out.get(c)
        t = coeff * v
        if s is None:
            if not t.is_zero():
                out[c] = -t
            continue
        s = s - t
        if s.is_zero():
            del out[c]
        else:
            out[c] = s
    return out


def reduce_row(row, basis):
    """Reduce a sparse row against an echelon basis [(pivot_col, row), ...]."""
    out = dict(row)
    for pc, brow in basis:
        v = out.get(pc)
        if v is not None and not v.is_zero():
            out = row_sub_scaled(out, v, brow)
    return {c: v for c, v in out.items() if not v.is_zero()}


def echelon(rows):
    """Echelon basis of the row span; rows are not mutated.

    Returns a list of (pivot_col, row) with each pivot normalized to 1 and
    eliminated from all other basis rows (reduced row echelon, up to row
    order which follows insertion order).
    """
    basis = []
    for row in rows:
        r = reduce_row(row, basis)
        if not r:
            continue
        pc = min(r, key=lambda c: (_weight(r[c]), c))
        inv = r[pc].inverse()
        r = {c: inv * v for c, v in r.items()}
        for i, (opc, orow) in enumerate(basis):
            v = orow.get(pc)
            if v is not None and not v.is_zero():
                basis[i] = (opc, row_sub_scaled(orow, v, r))
        basis.append((pc, r))
    return basis


def rank(rows):
    return len(echelon(rows))


def in_row_space(basis, row):
    """Membership of a row in the span of an echelon basis."""
    return not reduce_row(row, basis)


def span_contains(basis_rows, candidate_rows):
    """True when every candidate row lies in the span of basis_rows."""
    b = echelon(basis_rows)
    return all(in_row_space(b, r) for r in candidate_rows)


def rank_modular(rows, point, prime):
    """Rank of Scalar-entried rows after the substitution p -> point (mod
    prime).  This can only undershoot the exact rank, never overshoot; it is
    used as a cheap pre-screen that the exact elimination then confirms."""
    reduced = []
    for row in rows:
        r = {}
        for c, v in row.items():
            try:
                m = v.eval_mod(point, prime)
            except ZeroDivisionError:
                return None  # unlucky point
            if m:
                r[c] = m
        reduced.append(r)
    basis = []
    for row in reduced:
        for pc, brow in basis:
            v = row.get(pc)
            if v:
                f = v * pow(brow[pc], -1, prime) % prime
                row = {c: (row.get(c, 0) - f * w) % prime for c, w in brow.items()} | {
                    c: w for c, w in row.items() if c not in brow
                }
                row = {c: w for c, w in row.items() if w}
        if row:
            basis.append((min(row), row))
    return len(basis)


# ---------------------------------------------------------------------------
# sparse square matrices: {row: {col: value}}
# ---------------------------------------------------------------------------

def mat_from_entries(entries):
    """Build {r: {c: v}} from an iterable of (r, c, v), dropping zeros."""
    out = {}
    for r, c, v in entries:
        if not v.is_zero():
            out.setdefault(r, {})[c] = v
    return out


def mat_identity(labels):
    return {l: {l: ONE} for l in labels}


def mat_mul(a, b):
    out = {}
    for r, arow in a.items():
        acc = {}
        for k, av in arow.items():
            brow = b.get(k)
            if not brow:
                continue
            for c, bv in brow.items():
                s = acc.get(c)
                t = av * bv
                if s is None:
                    if not t.is_zero():
                        acc[c] = t
                else:
                    s = s + t
                    if s.is_zero():
                        del acc[c]
                    else:
                        acc[c] = s
        if acc:
            out[r] = acc
    return out


def mat_add(a, b):
    out = {r: dict(row) for r, row in a.items()}
    for r, brow in b.items():
        row = out.setdefault(r, {})
        for c, v in brow.items():
            s = row.get(c)
            if s is None:
                row[c] = v
            else:
                s = s + v
                if s.is_zero():
                    del row[c]
                else:
                    row[c] = s
        if not row:
            del out[r]
    return out


def mat_scale(a, k):
    if k.is_zero():
        return {}
    return {r: {c: k * v for c, v in row.items()} for r, row in a.items()}


def mat_sub(a, b):
    return mat_add(a, mat_scale(b, -ONE))


def mat_eq(a, b):
    return mat_sub(a, b) == {}


def mat_is_identity(a, labels):
    return mat_eq(a, mat_identity(list(labels)))


def mat_vec(a, x):
    """Matrix times sparse column vector {label: value}."""
    out = {}
    for r, arow in a.items():
        acc = None
        for c, v in arow.items():
            xv = x.get(c)
            if xv is None:
                continue
            t = v * xv
            acc = t if acc is None else acc + t
        if acc is not None and not acc.is_zero():
            out[r] = acc
    return out


def vec_mat(x, a):
    """Sparse row vector times matrix."""
    out = {}
    for r, xv in x.items():
        arow = a.get(r)
        if not arow:
            continue
        for c, v in arow.items():
            s = out.get(c)
            t = xv * v
            if s is None:
                if not t.is_zero():
                    out[c] = t
            else:
                s = s + t
                if s.is_zero():
                    del out[c]
                else:
                    out[c] = s
    return out


def mat_inverse(a, labels):
    """Exact inverse via Gauss-Jordan; raises ArithmeticError if singular."""
    labels = list(labels)
    work = {r: dict(a.get(r, {})) for r in labels}
    inv = {r: {r: ONE} for r in labels}
    order = []
    remaining = set(labels)
    for col in labels:
        piv = None
        best = None
        for r in remaining:
            v = work[r].get(col)
            if v is not None and not v.is_zero():
                w = _weight(v)
                if best is None or w < best:
                    best, piv = w, r
        if piv is None:
            raise ArithmeticError("singular matrix")
        remaining.discard(piv)
        order.append((col, piv))
        f = work[piv][col].inverse()
        work[piv] = {c: f * v for c, v in work[piv].items()}
        inv[piv] = {c: f * v for c, v in inv[piv].items()}
        for r in labels:
            if r == piv:
                continue
            v = work[r].get(col)
            if v is None or v.is_zero():
                continue
            work[r] = row_sub_scaled(work[r], v, work[piv])
            inv[r] = row_sub_scaled(inv[r], v, inv[piv])
    # rows of the inverse follow the pivot permutation
    out = {}
    for col, piv in order:
        out[col] = inv[piv]
    return out


def minimal_polynomial(a, labels):
    """Monic minimal polynomial of a sparse square matrix, as an ascending
    list of Scalar coefficients [c0, c1, ..., 1]."""
    basis = []
    power = mat_identity(labels)
    combos = []  # augmented coefficient rows
    k = 0
    while True:
        flat = {}
        for r, row in power.items():
            for c, v in row.items():
                flat[(r, c)] = v
        aug = {("#", k): ONE}
        row = dict(flat)
        coeffs = dict(aug)
        for (pc, brow), bco in zip(basis, combos):
            v = row.get(pc)
            if v is not None and not v.is_zero():
                row = row_sub_scaled(row, v, brow)
                coeffs = row_sub_scaled(coeffs, v, bco)
        row = {c: v for c, v in row.items() if not v.is_zero()}
        if not row:
            out = []
            lead = coeffs[("#", k)].inverse()
            for i in range(k + 1):
                c = coeffs.get(("#", i))
                out.append(lead * c if c is not None else Scalar.from_int(0))
            return out
        pc = min(row, key=lambda c: (_weight(row[c]), c))
        f = row[pc].inverse()
        row = {c: f * v for c, v in row.items()}
        coeffs = {c: f * v for c, v in coeffs.items()}
        basis.append((pc, row))
        combos.append(coeffs)
        power = mat_mul(power, a)
        k += 1
        if k > len(labels) + 1:
            raise ArithmeticError("minimal polynomial search exceeded bound")


def poly_eval_matrix(coeffs, a, labels):
    """Evaluate a polynomial (ascending Scalar coefficients) at a matrix."""
    out = {}
    power = mat_identity(labels)
    for i, c in enumerate(coeffs):
        if not c.is_zero():
            out = mat_add(out, mat_scale(power, c))
        if i + 1 < len(coeffs):
            power = mat_mul(power, a)
    return out
