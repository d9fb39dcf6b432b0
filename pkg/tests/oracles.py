"""Independent oracles shared by the tests (float rasters, brute force)."""
from fractions import Fraction

import numpy as np
from scipy import ndimage


def raster_values(f, res: int) -> np.ndarray:
    """Sample the PL function (mod 1) at pixel centres, ``res`` pixels per grid cell."""
    c = f.complex
    N, M = c.n_cols, c.n_rows
    t0 = np.array([float(x) for x in f.theta]).reshape(M, N)
    d = np.array([float(x) for x in f.delta]).reshape(M, N, 3)
    F10, F01, F11 = t0 + d[..., 0], t0 + d[..., 1], t0 + d[..., 2]
    s = (np.arange(res) + 0.5) / res
    v, u = np.meshgrid(s, s, indexing="ij")          # v along y, u along x
    lower = u >= v
    out = np.empty((M, res, N, res))
    for j in range(M):
        for i in range(N):
            a, b, cc, dd = t0[j, i], F10[j, i], F11[j, i], F01[j, i]
            out[j, :, i, :] = np.where(lower, a + u * (b - a) + v * (cc - b),
                                       a + u * (cc - dd) + v * (dd - a))
    return out.reshape(M * res, N * res) % 1.0


def torus_label_count(mask: np.ndarray, core=None) -> int:
    """Connected components of a boolean image on the torus (4-connectivity).

    With ``core``, only components containing a core pixel are counted.
    """
    lab, n = ndimage.label(mask)
    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in ((lab[0, :], lab[-1, :]), (lab[:, 0], lab[:, -1])):
        for x, y in zip(a, b):
            if x and y:
                parent[find(x)] = find(y)
    labels = range(1, n + 1) if core is None else set(np.unique(lab[core & mask])) - {0}
    return len({find(x) for x in labels})


def required_resolution(f, eps) -> int:
    """Pixels per cell so that a band of half-width ``eps`` is at least 3 pixels thick."""
    steepest = max(abs(float(d)) for d in f.delta)
    return max(8, int(np.ceil(3 * steepest / float(eps))))


def band_component_count(f, c, eps, res=None) -> int:
    """Components of ``{|f - c| < eps}`` on a raster; equals the number of leaves at a
    regular level ``c`` when no critical value lies within ``2 eps`` of it."""
    vals = raster_values(f, res or required_resolution(f, eps))
    dist = np.abs((vals - float(c) + 0.5) % 1.0 - 0.5)
    # where the band edge meets a crease at a shallow angle the raster leaves
    # sub-pixel wedge tips as specks; they never reach the level itself
    return torus_label_count(dist < eps, core=dist < eps / 4)


def regular_probe_levels(f, crit_values):
    """One level per arc between consecutive critical values, avoiding every vertex
    value, with its distance to the nearest critical value."""
    cv = sorted(crit_values)
    out = []
    for k, lo in enumerate(cv):
        hi = cv[(k + 1) % len(cv)] + (1 if k + 1 == len(cv) else 0)
        inside = sorted({t + (1 if t < lo else 0) for t in f.theta} - {lo, hi})
        pts = [lo] + [t for t in inside if lo < t < hi] + [hi]
        a, b = max(zip(pts, pts[1:]), key=lambda ab: ab[1] - ab[0])
        c = (a + b) / 2
        out.append((c % 1, min(c - lo, hi - c)))
    return out


def smallest_period(tokens) -> int:
    L = len(tokens)
    for p in range(1, L + 1):
        if L % p == 0 and all(tokens[i] == tokens[(i + p) % L] for i in range(L)):
            return p
    return L


def least_rotation_brute(seq) -> int:
    L = len(seq)
    rots = [list(seq[r:]) + list(seq[:r]) for r in range(L)]
    return min(range(L), key=lambda r: (rots[r], r))


def exact_fraction(x) -> Fraction:
    return Fraction(x)


def geometric_level_count(f, c) -> int:
    """Exact leaf count at a level through no vertex, by geometry alone.

    Each triangle is intersected with every lift of the level; segment ends are
    exact rational points of the plane reduced mod (N, M) and segments are
    joined where their ends coincide.
    """
    cx = f.complex
    N, M = cx.n_cols, cx.n_rows
    c = Fraction(c)
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for v in range(cx.n_vertices):
        i, j = cx.coords(v)
        t0 = f.theta[v]
        F10 = t0 + f.delta[3 * v]
        F01 = t0 + f.delta[3 * v + 1]
        F11 = t0 + f.delta[3 * v + 2]
        for pts in (((i, j), (i + 1, j), (i + 1, j + 1)), ((i, j), (i + 1, j + 1), (i, j + 1))):
            vals = {(i, j): t0, (i + 1, j): F10, (i + 1, j + 1): F11, (i, j + 1): F01}
            fv = [vals[p] for p in pts]
            lo, hi = min(fv), max(fv)
            m = -((-(lo - c)) // 1)           # smallest m with c + m >= lo
            while c + m <= hi:
                L = c + m
                ends = []
                for a in range(3):
                    p, q = pts[a], pts[(a + 1) % 3]
                    fp, fq = fv[a], fv[(a + 1) % 3]
                    if (fp - L) * (fq - L) < 0:
                        s = (L - fp) / (fq - fp)
                        x = (p[0] + s * (q[0] - p[0])) % N
                        y = (p[1] + s * (q[1] - p[1])) % M
                        ends.append((x, y))
                assert len(ends) == 2, "level through a vertex"
                parent[find(ends[0])] = find(ends[1])
                m += 1
    return len({find(x) for x in list(parent)})


def table_axioms_exhaustive(table):
    """Identity, inverses and associativity of a multiplication table, every triple checked.

    One row ``a`` at a time: ``(a*b)*c`` is row ``a*b`` of the table and
    ``a*(b*c)`` is row ``a`` read at ``b*c``.
    """
    t = np.asarray(table)
    t = t.astype(np.int16 if len(t) < 2**15 else np.int32)
    n = t.shape[0]
    ar = np.arange(n)
    ids = [e for e in range(n) if (t[e] == ar).all() and (t[:, e] == ar).all()]
    if len(ids) != 1:
        return False
    e = ids[0]
    if not ((t == e).sum(axis=1) == 1).all() or not ((t == e).sum(axis=0) == 1).all():
        return False
    for a in range(n):
        r = t[a]
        if not np.array_equal(t[r], np.take(r, t)):
            return False
    return True
