"""Pure-Python GJK distance kernel.

Twin of the compiled extension ``hullmpc.geometry._kernel``; both expose
``gjk_pair`` with identical semantics so the backend can be swapped at import
time. The kernel works on the Minkowski difference of the two vertex clouds
and recovers witness points from the barycentric coordinates of the terminal
simplex.

Status codes returned by ``gjk_pair``:
    0 -- disjoint, distance and witness pair valid
    1 -- collision (origin contained or distance below tolerance)
    2 -- iteration cap hit without convergence
"""
import numpy as np

STATUS_DISJOINT = 0
STATUS_COLLISION = 1
STATUS_NO_CONVERGENCE = 2

_DEGENERATE = 1e-30


def _support_index(verts, dx, dy, dz):
    # first maximal index wins: deterministic tie-break by lowest vertex index
    best = 0
    bestdot = verts[0][0] * dx + verts[0][1] * dy + verts[0][2] * dz
    for i in range(1, len(verts)):
        v = verts[i]
        d = v[0] * dx + v[1] * dy + v[2] * dz
        if d > bestdot:
            bestdot = d
            best = i
    return best


def _closest_segment(ax, ay, az, bx, by, bz):
    """Closest point to the origin on segment AB: (vx,vy,vz, lam_b, keep)."""
    abx, aby, abz = bx - ax, by - ay, bz - az
    den = abx * abx + aby * aby + abz * abz
    num = -(ax * abx + ay * aby + az * abz)
    if den <= _DEGENERATE or num <= 0.0:
        return ax, ay, az, 0.0, 1  # keep A only
    if num >= den:
        return bx, by, bz, 1.0, 2  # keep B only
    t = num / den
    return ax + t * abx, ay + t * aby, az + t * abz, t, 3  # keep both


def _closest_triangle(a, b, c):
    """Closest point to the origin on triangle ABC.

    Returns (vx, vy, vz, l0, l1, l2, mask) where mask has bit i set when
    vertex i supports the closest feature and l* are its barycentric weights.
    """
    abx, aby, abz = b[0] - a[0], b[1] - a[1], b[2] - a[2]
    acx, acy, acz = c[0] - a[0], c[1] - a[1], c[2] - a[2]
    # P = origin, ap = -A
    d1 = -(abx * a[0] + aby * a[1] + abz * a[2])
    d2 = -(acx * a[0] + acy * a[1] + acz * a[2])
    if d1 <= 0.0 and d2 <= 0.0:
        return a[0], a[1], a[2], 1.0, 0.0, 0.0, 1
    d3 = -(abx * b[0] + aby * b[1] + abz * b[2])
    d4 = -(acx * b[0] + acy * b[1] + acz * b[2])
    if d3 >= 0.0 and d4 <= d3:
        return b[0], b[1], b[2], 0.0, 1.0, 0.0, 2
    vc = d1 * d4 - d3 * d2
    if vc <= 0.0 and d1 >= 0.0 and d3 <= 0.0 and (d1 - d3) > _DEGENERATE:
        t = d1 / (d1 - d3)
        return (a[0] + t * abx, a[1] + t * aby, a[2] + t * abz,
                1.0 - t, t, 0.0, 3)
    d5 = -(abx * c[0] + aby * c[1] + abz * c[2])
    d6 = -(acx * c[0] + acy * c[1] + acz * c[2])
    if d6 >= 0.0 and d5 <= d6:
        return c[0], c[1], c[2], 0.0, 0.0, 1.0, 4
    vb = d5 * d2 - d1 * d6
    if vb <= 0.0 and d2 >= 0.0 and d6 <= 0.0 and (d2 - d6) > _DEGENERATE:
        t = d2 / (d2 - d6)
        return (a[0] + t * acx, a[1] + t * acy, a[2] + t * acz,
                1.0 - t, 0.0, t, 5)
    va = d3 * d6 - d5 * d4
    if va <= 0.0 and (d4 - d3) >= 0.0 and (d5 - d6) >= 0.0 \
            and ((d4 - d3) + (d5 - d6)) > _DEGENERATE:
        t = (d4 - d3) / ((d4 - d3) + (d5 - d6))
        return (b[0] + t * (c[0] - b[0]), b[1] + t * (c[1] - b[1]),
                b[2] + t * (c[2] - b[2]), 0.0, 1.0 - t, t, 6)
    denom = va + vb + vc
    if denom <= _DEGENERATE:
        # collinear triangle: best of the three edges
        best = None
        for (p, q, i, j) in ((a, b, 0, 1), (a, c, 0, 2), (b, c, 1, 2)):
            vx, vy, vz, t, keep = _closest_segment(p[0], p[1], p[2], q[0], q[1], q[2])
            dsq = vx * vx + vy * vy + vz * vz
            if best is None or dsq < best[0]:
                lam = [0.0, 0.0, 0.0]
                mask = 0
                if keep & 1:
                    lam[i] = 1.0 - t
                    mask |= 1 << i
                if keep & 2:
                    lam[j] = t
                    mask |= 1 << j
                if keep == 2:
                    lam[j] = 1.0
                best = (dsq, vx, vy, vz, lam[0], lam[1], lam[2], mask)
        return best[1:]
    inv = 1.0 / denom
    lb = vb * inv
    lc = vc * inv
    la = 1.0 - lb - lc
    return (a[0] * la + b[0] * lb + c[0] * lc,
            a[1] * la + b[1] * lb + c[1] * lc,
            a[2] * la + b[2] * lb + c[2] * lc,
            la, lb, lc, 7)


_TETRA_FACES = ((0, 1, 2, 3), (0, 1, 3, 2), (0, 2, 3, 1), (1, 2, 3, 0))


def _closest_tetra(w):
    """Closest point to the origin on tetra w[0..3].

    Returns (contained, vx, vy, vz, lambdas[4], mask).
    """
    best = None
    outside_any = False
    degenerate_any = False
    for (i, j, k, op) in _TETRA_FACES:
        p, q, r, s = w[i], w[j], w[k], w[op]
        nx = (q[1] - p[1]) * (r[2] - p[2]) - (q[2] - p[2]) * (r[1] - p[1])
        ny = (q[2] - p[2]) * (r[0] - p[0]) - (q[0] - p[0]) * (r[2] - p[2])
        nz = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
        signp = -(nx * p[0] + ny * p[1] + nz * p[2])
        signd = nx * (s[0] - p[0]) + ny * (s[1] - p[1]) + nz * (s[2] - p[2])
        degenerate = abs(signd) <= _DEGENERATE
        outside = (not degenerate) and (signp * signd < 0.0)
        if degenerate:
            degenerate_any = True
        if outside:
            outside_any = True
        if outside or degenerate:
            vx, vy, vz, l0, l1, l2, m = _closest_triangle(p, q, r)
            dsq = vx * vx + vy * vy + vz * vz
            if best is None or dsq < best[0]:
                lam = [0.0, 0.0, 0.0, 0.0]
                lam[i], lam[j], lam[k] = l0, l1, l2
                mask = 0
                if m & 1:
                    mask |= 1 << i
                if m & 2:
                    mask |= 1 << j
                if m & 4:
                    mask |= 1 << k
                best = (dsq, vx, vy, vz, lam, mask)
    if not outside_any and not degenerate_any:
        return True, 0.0, 0.0, 0.0, [0.25, 0.25, 0.25, 0.25], 15
    if best is None:
        # every face degenerate and none produced a candidate: collapse to w[0]
        return False, w[0][0], w[0][1], w[0][2], [1.0, 0.0, 0.0, 0.0], 1
    return False, best[1], best[2], best[3], best[4], best[5]


def _closest_simplex(w):
    """Dispatch on simplex size: (contained, vx, vy, vz, lambdas, mask)."""
    n = len(w)
    if n == 1:
        return False, w[0][0], w[0][1], w[0][2], [1.0], 1
    if n == 2:
        vx, vy, vz, t, keep = _closest_segment(w[0][0], w[0][1], w[0][2],
                                               w[1][0], w[1][1], w[1][2])
        if keep == 1:
            return False, vx, vy, vz, [1.0, 0.0], 1
        if keep == 2:
            return False, vx, vy, vz, [0.0, 1.0], 2
        return False, vx, vy, vz, [1.0 - t, t], 3
    if n == 3:
        vx, vy, vz, l0, l1, l2, mask = _closest_triangle(w[0], w[1], w[2])
        return False, vx, vy, vz, [l0, l1, l2], mask
    return _closest_tetra(w)


def gjk_pair(verts_a, verts_b, tol=1e-9, max_iter=128):
    """GJK distance between two vertex clouds given in a common frame.

    Parameters
    ----------
    verts_a, verts_b : array-like, shape (n, 3)
    tol : float
        Absolute progress tolerance; distances below it report collision.
    max_iter : int
        Simplex iteration cap.

    Returns
    -------
    (status, distance, p_a, p_b, iterations)
    """
    A = np.asarray(verts_a, dtype=float).reshape(-1, 3).tolist()
    B = np.asarray(verts_b, dtype=float).reshape(-1, 3).tolist()

    cax = sum(p[0] for p in A) / len(A)
    cay = sum(p[1] for p in A) / len(A)
    caz = sum(p[2] for p in A) / len(A)
    cbx = sum(p[0] for p in B) / len(B)
    cby = sum(p[1] for p in B) / len(B)
    cbz = sum(p[2] for p in B) / len(B)
    dx, dy, dz = cbx - cax, cby - cay, cbz - caz
    if dx * dx + dy * dy + dz * dz <= _DEGENERATE:
        dx, dy, dz = 1.0, 0.0, 0.0

    ia = _support_index(A, dx, dy, dz)
    ib = _support_index(B, -dx, -dy, -dz)
    w = [(A[ia][0] - B[ib][0], A[ia][1] - B[ib][1], A[ia][2] - B[ib][2])]
    idx = [(ia, ib)]
    lam = [1.0]

    prev_dsq = float("inf")
    converged = False
    collision = False
    it = 0
    while it < max_iter:
        it += 1
        contained, vx, vy, vz, lam, mask = _closest_simplex(w)
        # prune the simplex to the supporting feature
        w = [w[i] for i in range(len(w)) if mask & (1 << i)]
        idx = [idx[i] for i in range(len(idx)) if mask & (1 << i)]
        lam = [lam[i] for i in range(len(lam)) if mask & (1 << i)]
        dsq = vx * vx + vy * vy + vz * vz
        if contained or dsq <= tol * tol:
            collision = True
            converged = True
            break
        if dsq >= prev_dsq:
            converged = True  # numerical stall: current simplex is optimal
            break
        prev_dsq = dsq
        ia = _support_index(A, -vx, -vy, -vz)
        ib = _support_index(B, vx, vy, vz)
        if (ia, ib) in idx:
            converged = True
            break
        wx = A[ia][0] - B[ib][0]
        wy = A[ia][1] - B[ib][1]
        wz = A[ia][2] - B[ib][2]
        # duality gap |v|^2 - <v, w> bounds d - d_lower by gap / |v|, so this
        # terminates once d is within tol meters of optimal
        gap = dsq - (vx * wx + vy * wy + vz * wz)
        if gap <= tol * dsq ** 0.5:
            converged = True
            break
        w.append((wx, wy, wz))
        idx.append((ia, ib))

    if not converged:
        return STATUS_NO_CONVERGENCE, 0.0, np.zeros(3), np.zeros(3), it
    if collision:
        return STATUS_COLLISION, 0.0, np.zeros(3), np.zeros(3), it

    pax = pay = paz = pbx = pby = pbz = 0.0
    for li, (i, j) in zip(lam, idx):
        pax += li * A[i][0]
        pay += li * A[i][1]
        paz += li * A[i][2]
        pbx += li * B[j][0]
        pby += li * B[j][1]
        pbz += li * B[j][2]
    gx, gy, gz = pax - pbx, pay - pby, paz - pbz
    dist = (gx * gx + gy * gy + gz * gz) ** 0.5
    if dist <= tol:
        return STATUS_COLLISION, 0.0, np.zeros(3), np.zeros(3), it
    return (STATUS_DISJOINT, dist,
            np.array([pax, pay, paz]), np.array([pbx, pby, pbz]), it)
