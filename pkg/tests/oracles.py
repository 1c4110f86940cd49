"""Independent reference computations used by the test suite.

Nothing in here may import the GJK kernel or the QP solver under test.
"""
import numpy as np


def hull_pair_distance_fw(verts_a, verts_b, max_iter=500_000, rel_tol=1e-9):
    """Minimal distance between two vertex-cloud hulls by Frank-Wolfe.

    Minimizes 0.5*||A^T lam - B^T mu||^2 over the product of the two
    vertex-weight simplices, with away steps (linear convergence on
    polytopes) and exact line search. Stops on the Frank-Wolfe gap
    certificate, which bounds f - f* and hence the distance error by
    rel_tol * (1 + d). Returns (distance, p_a, p_b).
    """
    A = np.asarray(verts_a, float).reshape(-1, 3)
    B = np.asarray(verts_b, float).reshape(-1, 3)
    na, nb = len(A), len(B)
    # dense weights over vertex pairs: alpha[i, j] >= 0, total mass 1;
    # marginals are the two simplex points
    alpha = np.zeros((na, nb))
    alpha[0, 0] = 1.0
    scale = 1.0 + max(np.abs(A).max(), np.abs(B).max()) ** 2

    for _ in range(max_iter):
        lam = alpha.sum(axis=1)
        mu = alpha.sum(axis=0)
        g = A.T @ lam - B.T @ mu  # current difference vector = gradient seed
        ga = A @ g
        gb = B @ g
        # gradient over pair (i, j) is ga[i] - gb[j]
        i_s = int(np.argmin(ga))
        j_s = int(np.argmax(gb))
        grad_s = ga[i_s] - gb[j_s]
        grad_x = float(lam @ ga - mu @ gb)
        fw_gap = grad_x - grad_s  # certifies f(x) - f* <= fw_gap
        d_est = float(np.sqrt(grad_x)) if grad_x > 0.0 else 0.0
        # d_est - d* <= 2 gap / d_est, so this certifies the relative target;
        # the absolute floors handle (near-)touching pairs
        if fw_gap <= max(0.5 * rel_tol * d_est * (1.0 + d_est), 1e-20 * scale) \
                or grad_x <= 1e-16:
            break
        masked = np.where(alpha > 0.0, ga[:, None] - gb[None, :], -np.inf)
        i_v, j_v = np.unravel_index(int(np.argmax(masked)), alpha.shape)
        away_gap = (ga[i_v] - gb[j_v]) - grad_x

        if fw_gap >= away_gap:
            # toward the FW vertex: x <- (1-gamma) x + gamma s
            dg = (A[i_s] - B[j_s]) - g
            gamma_max = 1.0
            away = False
        else:
            # away from the worst active vertex: x <- (1+gamma) x - gamma v
            dg = g - (A[i_v] - B[j_v])
            a_v = alpha[i_v, j_v]
            if a_v >= 1.0 - 1e-18:
                break
            gamma_max = a_v / (1.0 - a_v)
            away = True
        denom = float(dg @ dg)
        if denom <= 0.0:
            break
        gamma = min(gamma_max, max(0.0, -float(g @ dg) / denom))
        if gamma <= 0.0:
            break
        if away:
            alpha *= (1.0 + gamma)
            alpha[i_v, j_v] = max(alpha[i_v, j_v] - gamma, 0.0)
        else:
            alpha *= (1.0 - gamma)
            alpha[i_s, j_s] += gamma

    lam = alpha.sum(axis=1)
    mu = alpha.sum(axis=0)
    pa = A.T @ lam
    pb = B.T @ mu
    return float(np.linalg.norm(pa - pb)), pa, pb


def point_to_hull_residual(point, verts):
    """Convex-combination membership LP residual of a point w.r.t. a hull.

    Minimizes t subject to |V^T lam - p| <= t componentwise, sum(lam) = 1,
    lam >= 0; the optimum is 0 exactly when the point lies in the hull.
    """
    from scipy.optimize import linprog

    p = np.asarray(point, float).reshape(3)
    V = np.asarray(verts, float).reshape(-1, 3)
    n = len(V)
    # variables: lam (n), t (1)
    c = np.zeros(n + 1)
    c[-1] = 1.0
    ones_t = -np.ones((3, 1))
    A_ub = np.block([[V.T, ones_t], [-V.T, ones_t]])
    b_ub = np.r_[p, -p]
    A_eq = np.r_[np.ones(n), 0.0].reshape(1, -1)
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=[1.0],
                  bounds=[(0, None)] * n + [(0, None)], method="highs")
    if res.status != 0:
        raise RuntimeError(f"membership LP failed: {res.message}")
    return float(res.x[-1])


def random_hull(rng, n_lo=4, n_hi=12, spread=1.0, center_box=2.0):
    """Random vertex cloud: n vertices in a unit-ish ball around a random center."""
    n = int(rng.integers(n_lo, n_hi + 1))
    center = rng.uniform(-center_box, center_box, 3)
    return center + rng.normal(scale=spread * 0.5, size=(n, 3))


def qp_solve_pg(H, g, G, h, max_iter=1_000_000, tol=1e-13):
    """Strictly convex inequality QP via accelerated projected gradient on the dual.

    min 0.5 z'Hz + g'z s.t. G z <= h with H positive definite. The dual is a
    nonnegatively-constrained quadratic, so the projection is a clamp.
    Returns (z, objective).
    """
    H = np.asarray(H, float)
    g = np.asarray(g, float).reshape(-1)
    G = np.asarray(G, float).reshape(-1, len(g))
    h = np.asarray(h, float).reshape(-1)
    m = len(h)
    if m == 0:
        z = np.linalg.solve(H, -g)
        return z, float(0.5 * z @ H @ z + g @ z)
    Hinv_g = np.linalg.solve(H, g)
    Hinv_GT = np.linalg.solve(H, G.T)
    M = G @ Hinv_GT
    q0 = G @ Hinv_g + h
    L = float(np.linalg.eigvalsh(M)[-1]) + 1e-12
    scale = 1.0 + float(np.abs(q0).max())

    lam = np.zeros(m)
    y = lam.copy()
    t = 1.0
    for _ in range(max_iter):
        grad_y = M @ y + q0
        lam_new = np.maximum(y - grad_y / L, 0.0)
        # projected-gradient residual at the new point certifies optimality
        res = lam_new - np.maximum(lam_new - (M @ lam_new + q0), 0.0)
        if np.abs(res).max() <= tol * scale:
            lam = lam_new
            break
        if (y - lam_new) @ (lam_new - lam) > 0.0:
            t = 1.0  # adaptive restart
        t_new = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
        y = lam_new + ((t - 1.0) / t_new) * (lam_new - lam)
        lam = lam_new
        t = t_new
    z = -np.linalg.solve(H, g + G.T @ lam)
    return z, float(0.5 * z @ H @ z + g @ z)


def random_feasible_qp(rng, n_max=64, m_max=128):
    """Random strictly convex QP with a guaranteed strictly feasible point."""
    n = int(rng.integers(2, n_max + 1))
    m = int(rng.integers(1, m_max + 1))
    Mfac = rng.normal(size=(n, n))
    H = Mfac @ Mfac.T + (0.5 + rng.uniform()) * np.eye(n)
    g = rng.normal(size=n)
    G = rng.normal(size=(m, n))
    z0 = rng.normal(size=n)
    h = G @ z0 + rng.uniform(0.05, 1.0, size=m)  # z0 strictly feasible
    return H, g, G, h
