"""Independent reference values for the C++ test suites.

Run with `python3 tests/oracles/compute_oracles.py`; the printed values are
frozen into the doctest files. Nothing here shares code with the library.
"""
import math

import numpy as np
from scipy import integrate, optimize, special

PHI0 = 2.067833848e-15


def ag_rhs(zeta):
    # ln(Delta/Delta0) at T=0 as a function of zeta = Gamma/Delta
    if zeta <= 1.0:
        return -math.pi * zeta / 4.0
    return (-math.acosh(zeta)
            + 0.5 * (math.sqrt(1.0 - zeta ** -2) - zeta * math.asin(1.0 / zeta)))


def ag_numeric(alpha):
    if alpha == 0.0:
        return 1.0
    if alpha >= 1.0:
        return 0.0
    g = lambda r: math.log(r) - ag_rhs(alpha / (2.0 * r))
    return optimize.brentq(g, 1e-300, 1.0, xtol=1e-16, rtol=1e-15)


def ag_numeric_gap_integral(alpha):
    """Second route: T=0 AG self-consistency written as an energy integral.

    ln(Delta0/Delta) = int_0^inf dw [1/sqrt(w^2+1) - Re(u/sqrt(u^2-1)) ...]
    is awkward; instead solve the Skalski relation with mpmath at high precision.
    """
    import mpmath as mp
    mp.mp.dps = 40
    if alpha == 0:
        return 1.0

    def rhs(z):
        if z <= 1:
            return -mp.pi * z / 4
        return -mp.acosh(z) + (mp.sqrt(1 - z ** -2) - z * mp.asin(1 / z)) / 2

    f = lambda r: mp.log(r) - rhs(mp.mpf(alpha) / (2 * r))
    return float(mp.findroot(f, (mp.mpf('1e-30'), mp.mpf(1)), solver='anderson'))


def ag_interp(a):
    gamma = (12 - math.pi) / (4 - math.pi)
    return math.sqrt(max(0.0, 1 - math.pi / 4 * a - (1 - math.pi / 4) * a ** gamma))


def F(y, chi):
    if chi < 1e-6:
        return 1.0 if y == 0 else math.sin(y) / y
    return chi ** 2 / (chi ** 2 + y ** 2) * (y * math.sin(y) / (chi * math.tanh(chi)) + math.cos(y))


def beta_fd(y, chi, h=1e-6):
    # 1 + y d/dy ln|F| by central differences
    return 1 + y * (math.log(abs(F(y + h, chi))) - math.log(abs(F(y - h, chi)))) / (2 * h)


def beta_chi_form(y, chi):
    a = chi * math.tanh(chi)
    num = (y * math.sin(y) / a) * (y / math.tan(y) + 2 * chi ** 2 / (chi ** 2 + y ** 2)) \
        + math.cos(y) * (1 - y * math.tan(y) - 2 * y ** 2 / (chi ** 2 + y ** 2))
    den = y * math.sin(y) / a + math.cos(y)
    return num / den


def edges(fp, eta, n_p, cj, cg, beta=1.0):
    g = math.pi / n_p
    s = cg / cj
    out = []
    for sg in (-1, 1):
        num = g * g * (1 + sg * beta * eta / 2)
        den = g * g * (1 + sg * eta / 2) + s * (1 - sg * eta / 2)
        out.append(fp * math.sqrt(num / den))
    return out


def center(fp, n_p, cj, cg, harmonic=1):
    g = harmonic * math.pi / n_p
    return fp * g / math.sqrt(g * g + cg / cj)


def main():
    print("== gap physics")
    for a in (0.25, 0.5, 0.7, 0.9, 0.99):
        print(f"ag_numeric({a}) = {ag_numeric(a):.12f}  mp = {ag_numeric_gap_integral(a):.12f}"
              f"  interp = {ag_interp(a):.12f}  gl = {math.sqrt(1 - math.pi / 4 * a):.12f}")
    grid = np.linspace(0, 1, 1000)
    num = np.array([ag_numeric(a) for a in grid])
    itp = np.array([ag_interp(a) for a in grid])
    gl = np.sqrt(np.clip(1 - math.pi / 4 * grid, 0, None))
    mask = num > 0
    print("max rel dev interp/numeric (num>0):", np.max(np.abs(itp[mask] - num[mask]) / num[mask]))
    m5 = num > 0.05
    print("max rel dev interp/numeric (num>0.05):", np.max(np.abs(itp[m5] - num[m5]) / num[m5]))
    low = (grid <= 0.7)
    print("max rel dev GL/numeric (a<=0.7):", np.max(np.abs(gl[low] - num[low]) / num[low]))
    hi = (grid > 0.85) & mask
    print("max rel dev GL/numeric (a>0.85):", np.max(np.abs(gl[hi] - num[hi]) / num[hi]))
    print("gl_gap(118,236) =", math.sqrt(1 - (118 / (2 * 236 / math.sqrt(math.pi))) ** 2))
    print("Bc tilde(236) =", 2 * 236 / math.sqrt(math.pi))
    for T in (0.3, 0.6, 0.01):
        print(f"tanh gap T={T}:", math.tanh(1.74 * math.sqrt(1.27 / T - 1)))
    print("fg ratio 0.3/0.01:", math.sqrt(math.tanh(1.74 * math.sqrt(1.27 / 0.3 - 1)) /
                                           math.tanh(1.74 * math.sqrt(1.27 / 0.01 - 1))))
    print("fg ratio 0.6/0:", math.sqrt(math.tanh(1.74 * math.sqrt(1.27 / 0.6 - 1))))
    xi = lambda b: math.sqrt(PHI0 / (2 * math.pi * b * 1e-3)) * 1e9
    print("xi(10.3) nm =", xi(10.3), " xi(41.2) =", xi(41.2), " xi(2.575) =", xi(2.575))
    print("t(10.3,236,180) =", 2 * math.sqrt(3) * 180 * 10.3 / 236)
    print("t(10.3,236,xi(10.3)) =", 2 * math.sqrt(3) * xi(10.3) * 10.3 / 236)
    BL = lambda w, x: 2 * PHI0 / (math.pi * (w * 1e-6) ** 2) * math.log(2 * w * 1e-6 / (math.pi * x * 1e-9)) * 1e3
    print("B_L(0.7,180) mT =", BL(0.7, 180), " B_L(1.4,180) =", BL(1.4, 180))

    print("== fraunhofer")
    print("J(0,0.668) =", 1 / math.cosh(0.668))
    print("F(pi/2,0.668) =", F(math.pi / 2, 0.668))
    print("F(pi,0.668) =", F(math.pi, 0.668))
    print("F(1,1e-8) =", F(1.0, 1e-8))
    # Fraunhofer zero of F for chi=0.668 in (pi/2, pi)
    yz = optimize.brentq(lambda y: F(y, 0.668), math.pi / 2, math.pi, xtol=1e-15)
    print("first zero of F(.,0.668) y =", yz, " -> B/BPhi =", yz / math.pi)
    yb = optimize.brentq(lambda y: y / math.tan(y) + 0.716, math.pi / 2 + 1e-9, math.pi - 1e-9, xtol=1e-15)
    print("y cot y = -0.716 root:", yb)
    for y in (0.7, 1.3, 2.0, 4.0):
        print(f"beta_fd({y},0.668) = {beta_fd(y, 0.668):.10f}  beta_chi_form = {beta_chi_form(y, 0.668):.10f}")
    print("BPhi1(w=0.7um,l=28.5nm) mT =", PHI0 / (28.5e-9 * 0.7e-6) * 1e3)
    print("BPhi2(h=16um,l=28.5nm) mT =", PHI0 / (28.5e-9 * 16e-6) * 1e3)

    print("== array model")
    fpA = 1 / (2 * math.pi * math.sqrt(95e-12 * 500e-15)) / 1e9
    fpB = 1 / (2 * math.pi * math.sqrt(133e-12 * 490e-15)) / 1e9
    print("fp A =", fpA, " fp B =", fpB)
    print("ls A =", math.sqrt(500 / 38), " ls B =", math.sqrt(490 / 29))
    print("edges A(23.0) =", edges(23.0, 0.05, 28, 500, 38), " mean =", np.mean(edges(23.0, 0.05, 28, 500, 38)))
    print("center A(23.0) =", center(23.0, 28, 500, 38), " center A(fp) =", center(fpA, 28, 500, 38))
    print("center A h2 (23.0) =", center(23.0, 28, 500, 38, 2))
    print("center B(fp) =", center(fpB, 33, 490, 29), " edges B =", edges(fpB, 0.05, 33, 490, 29))
    print("Z A =", math.sqrt(95e-12 / 38e-15), " Z B =", math.sqrt(133e-12 / 29e-15))
    g = math.pi / 28
    s = 38 / 500
    bc = (g * g - s) / (g * g + s)
    print("beta_c A =", bc)
    for n in range(4):
        approx = 4.55 * ((n + 0.5) - bc / (math.pi ** 2 * (n + 0.5)))
        lo = n * math.pi + math.pi / 2 + 1e-9
        hi = (n + 1) * math.pi - 1e-9
        y = optimize.brentq(lambda y: y / math.tan(y) - bc, lo, hi, xtol=1e-15)
        print(f"closing n={n}: approx {approx:.6f}  exact {4.55 * y / math.pi:.6f}  diff {abs(approx - 4.55 * y / math.pi):.6f}")
    # chi-form closing fields at chi = 0.668
    for n in range(2):
        f = lambda y: beta_chi_form(y, 0.668) - bc
        ys = np.linspace(n * math.pi + 1e-3, (n + 1) * math.pi - 1e-3, 20001)
        vals = [f(y) for y in ys]
        roots = [optimize.brentq(f, ys[i], ys[i + 1]) for i in range(len(ys) - 1)
                 if np.sign(vals[i]) != np.sign(vals[i + 1]) and abs(vals[i]) < 5 and abs(vals[i + 1]) < 5]
        print(f"chi=0.668 lobe {n} roots B =", [4.55 * r / math.pi for r in roots])

    print("== gain metrics")
    # Gaussian bump in dB smoothed by boxcar width W: closed form convolution
    A, sig, W, f0 = 20.0, 0.3, 0.5, 6.0
    sm = lambda f: A * sig * math.sqrt(math.pi / 2) / W * (
        special.erf((f - f0 + W / 2) / (sig * math.sqrt(2))) - special.erf((f - f0 - W / 2) / (sig * math.sqrt(2))))
    peak = sm(f0)
    half = optimize.brentq(lambda f: sm(f) - (peak - 3), f0, f0 + 5)
    print("smoothed gaussian peak =", peak, " 3dB bw =", 2 * (half - f0))
    # quadrature check of the closed form
    q = integrate.quad(lambda u: A * math.exp(-(u - f0) ** 2 / (2 * sig ** 2)), f0 - W / 2, f0 + W / 2)[0] / W
    print("quadrature peak =", q)


if __name__ == "__main__":
    main()
