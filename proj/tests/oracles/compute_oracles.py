"""Reference values for the unit tests, computed with mpmath at 30 digits.

Run: python3 tests/oracles/compute_oracles.py
The printed values are frozen in tests/unit/oracles.hpp.
"""
from mpmath import mp, mpf, sqrt, atan, cos, sin, exp, quad, pi, inf, re, matrix, lu_solve

mp.dps = 30


def alpha_beta(delta, r, sR):
    q = 2 * r / sR**2
    root = sqrt((q - 1) ** 2 + 8 * delta / sR**2)
    return (root - (1 + q)) / 2, root - 1


def DE(x, lam, c, sP, sR, r, delta, rho):
    _, beta = alpha_beta(delta, r, sR)
    s = sP * sqrt(1 - rho**2)
    k = c - r * rho * sP / sR
    t0 = atan(sR * x / s)
    norm = s ** (1 + beta) * sR ** (1 + lam)
    fD = lambda t: cos(t) ** (beta - lam) * (s * sin(t) - sR * x * cos(t)) ** lam * exp(-2 * k * t / (s * sR))
    fE = lambda t: cos(t) ** (beta - lam) * (sR * x * cos(t) - s * sin(t)) ** lam * exp(-2 * k * t / (s * sR))
    return re(quad(fD, [t0, pi / 2])) / norm, re(quad(fE, [-pi / 2, t0])) / norm


def ruin_rho1(u, p, sP, sR, r):
    q = p - r * sP / sR
    y0 = sP / sR
    f = lambda v: (v + y0) ** (-2 * r / sR**2) * exp(2 * q / (sR**2 * (v + y0)))
    return quad(f, [u, inf]) / quad(f, [0, 1, 10, inf])


def main():
    p, sP, sR = mpf(1), mpf(1), mpf("0.5")
    print("# rho = 1 ruin, r = 0.2")
    for u in ["0.5", "1", "2", "5"]:
        print(f"psi_rho1({u}) = {mp.nstr(ruin_rho1(mpf(u), p, sP, sR, mpf('0.2')), 20)}")

    r, delta = mpf("0.05"), mpf("0.1")
    a, b = alpha_beta(delta, r, sR)
    print(f"alpha = {mp.nstr(a, 20)}  beta = {mp.nstr(b, 20)}")
    D, E = DE(mpf("0.5"), a + 1, p, sP, sR, r, delta, 0)
    print(f"D(0.5, alpha+1) = {mp.nstr(D, 20)}  E = {mp.nstr(E, 20)}  (rho = 0, c = 1)")

    rho = mpf("0.3")
    x0 = sP * rho / sR
    d0 = DE(x0, a + 1, p, sP, sR, r, delta, rho)[0]
    for u in ["0.5", "1", "2", "5"]:
        g = DE(mpf(u) + x0, a + 1, p, sP, sR, r, delta, rho)[0] / d0
        print(f"gerber_rho03({u}) = {mp.nstr(g, 20)}")

    # Threshold strategy, rho = 0, b = 2, mu = 0.5.
    bb, mu = mpf(2), mpf("0.5")
    lo = lambda u: DE(u, a + 1, p, sP, sR, r, delta, 0)
    up = lambda u: DE(u, a + 1, p - mu, sP, sR, r, delta, 0)
    h = mpf("1e-8")
    dlo = lambda u: [(x - y) / (2 * h) for x, y in zip(lo(u + h), lo(u - h))]
    dup = lambda u: [(x - y) / (2 * h) for x, y in zip(up(u + h), up(u - h))]
    z, lb, ub, dl, du = lo(0), lo(bb), up(bb), dlo(bb), dup(bb)
    A = matrix([[z[0], z[1], 0], [lb[0], lb[1], -ub[0]], [dl[0], dl[1], -du[0]]])
    C = lu_solve(A, matrix([0, mu / delta, 0]))
    print(f"threshold C3 = {mp.nstr(C[0], 15)}  C4 = {mp.nstr(C[1], 15)}  C5 = {mp.nstr(C[2], 15)}")
    for u in ["0.5", "2", "4"]:
        uu = mpf(u)
        v = C[0] * lo(uu)[0] + C[1] * lo(uu)[1] if uu <= bb else C[2] * up(uu)[0] + mu / delta
        print(f"threshold V({u}) = {mp.nstr(v, 15)}")

    # Barrier strategy, rho = 0, b = 1.
    bb = mpf(1)
    z, dl = lo(0), dlo(bb)
    A = matrix([[z[0], z[1]], [dl[0], dl[1]]])
    C = lu_solve(A, matrix([0, 1]))
    print(f"barrier C7 = {mp.nstr(C[0], 15)}  C8 = {mp.nstr(C[1], 15)}")
    for u in ["0.25", "0.5", "1"]:
        v = C[0] * lo(mpf(u))[0] + C[1] * lo(mpf(u))[1]
        print(f"barrier V({u}) = {mp.nstr(v, 15)}")


if __name__ == "__main__":
    main()
