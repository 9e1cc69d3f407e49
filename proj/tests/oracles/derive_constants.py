"""Independent reference computations for constants frozen into the unit tests.

Run with `python3 tests/oracles/derive_constants.py`; nothing here is imported
by the C++ build. Each block re-derives a value from its defining formula
using only numpy/mpmath, without sharing code with the library.
"""

import math

import mpmath
import numpy as np

M64 = (1 << 64) - 1


def simplex_projection_grid(x, h=1e-3):
    n = round(1 / h)
    best, arg = float("inf"), None
    for i in range(n + 1):
        for j in range(n + 1 - i):
            q = np.array([i * h, j * h, 1 - i * h - j * h])
            d = float(np.sum((q - x) ** 2))
            if d < best:
                best, arg = d, q
    return arg


def mix64(z):
    z = (z + 0x9E3779B97F4A7C15) & M64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & M64
    return z ^ (z >> 31)


def counter_uniform(seed, stream, counter):
    bits = mix64((mix64(seed ^ mix64(stream)) + counter) & M64)
    return (bits >> 11) * 2.0**-53


def full_info_hand_simulation():
    # Interval [0, 1], f_t(x) = a_t (1 - x), g_t(x) = b_t x, budget 1.
    a = [0.8, 0.3, 0.6]
    b = [0.5, 0.9, 0.2]
    budget, T, D = 1.0, 3, 1.0
    G = max(max(a), max(b))
    lam = 1.0 / (2.0 * (G * D * math.sqrt(2 * T) + budget))
    V = 1.0 / (G * D)
    x, Q, S = 0.5, 0.0, 0.0
    rows = []
    for t in range(T):
        cost = a[t] * (1 - x)
        use = b[t] * x
        Q += use
        H = V * (-a[t]) + lam * math.exp(lam * Q) * b[t]
        S += H * H
        eta = math.sqrt(2) * D / (2 * math.sqrt(S))
        rows.append((x, cost, use, Q, eta))
        x = min(1.0, max(0.0, x - eta * H))
    return lam, V, rows, x


def k2_root(c):
    # 1/s + 1/(c + s) = 1  <=>  s^2 + (c - 2) s - c = 0, positive root.
    return (2 - c + math.sqrt(c * c + 4)) / 2


def k2_solve(a):
    lo = min(a)
    shifted = [v - lo for v in a]
    j = 0 if shifted[0] > 0 else 1
    s = k2_root(shifted[j])
    q = [1 / (v + s) for v in shifted]
    tot = sum(q)
    return [v / tot for v in q]


def bandit_hand_simulation(seed=7):
    losses = [(0.2, 0.9), (0.7, 0.1), (0.4, 0.5)]
    uses = [(0.0, 1.0), (0.3, 0.6), (1.0, 0.0)]
    K, T, B = 2, 3, 2.0  # witness e_0 uses 1.3 <= B
    m = math.log(T)
    r = math.sqrt(T)
    V = (m * math.e * (18 * K * r * m * m + B)) ** m / (36 * K * r * m * m)
    Q = m
    p = [0.5, 0.5]
    eta, gamma, S = float(K), 0.5, 0.0
    L = [0.0, 0.0]
    rows = []
    for t in range(1, T + 1):
        pm = [(1 - gamma) * pj + gamma / K for pj in p]
        u = counter_uniform(seed, 0, t)
        arm = 0 if u < pm[0] else 1
        sur = V * losses[t - 1][arm] + math.e * m * Q ** (m - 1) * uses[t - 1][arm]
        Q += uses[t - 1][arm]
        est = [0.0, 0.0]
        est[arm] = sur / pm[arm]
        # Stability term at (p_t, eta_{t-1}).
        q = k2_solve([1 / p[j] + eta * est[j] for j in range(K)])
        breg = sum(-math.log(q[j] / p[j]) + q[j] / p[j] - 1 for j in range(K))
        M = max(0.0, sum(est[j] * (p[j] - q[j]) for j in range(K)) - breg / eta)
        S += M
        gamma = min(0.5, math.sqrt(K / t))
        eta = K / (1 + S)
        L = [L[j] + est[j] for j in range(K)]
        p = k2_solve([eta * L[j] for j in range(K)])
        rows.append((arm, pm, sur, Q, M, eta, gamma, p))
    return V, rows


def bandit_log10_v(K, T, B):
    mpmath.mp.dps = 50
    m = mpmath.log(T)
    r = mpmath.sqrt(T)
    num = (m * mpmath.e * (18 * K * r * m**2 + B)) ** m
    return mpmath.log10(num / (36 * K * r * m**2))


if __name__ == "__main__":
    np.set_printoptions(precision=17)
    print("simplex grid projection of (1, 0.2, 0):",
          simplex_projection_grid(np.array([1.0, 0.2, 0.0])))
    lam, V, rows, x_final = full_info_hand_simulation()
    print(f"full-info lambda={lam!r} V={V!r}")
    for r in rows:
        print("  x=%r cost=%r use=%r Q=%r eta=%r" % r)
    print(f"  x_4={x_final!r}")
    Vb, brow = bandit_hand_simulation()
    print(f"bandit V={Vb!r}")
    for arm, pm, sur, Q, M, eta, gamma, p in brow:
        print(f"  arm={arm} pm={pm!r} surrogate={sur!r} Q={Q!r} M={M!r} "
              f"eta={eta!r} gamma={gamma!r} p={p!r}")
    print("log10 V (K=5, T=1e5, B=1e3):", mpmath.nstr(bandit_log10_v(5, 10**5, 1000), 20))
    print("log10 V (K=2, T=20, B=0):", mpmath.nstr(bandit_log10_v(2, 20, 0), 20))
    print("ftrl K=2 eta=1 L=(1,0):", k2_solve([1.0, 0.0]))
