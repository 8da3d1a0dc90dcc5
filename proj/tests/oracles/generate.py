"""Regenerate oracle_values.hpp with 50-digit mpmath arithmetic.

Model family: xi(r) = alpha (1 - r atanh r + omega r) on the annulus between
its two zeros, maximum at r = R, |grad xi| = 1 on the upper zero.

    python3 generate.py > oracle_values.hpp
"""

import mpmath as mp

mp.mp.dps = 50


def f(r, omega):
    return 1 - r * mp.atanh(r) + omega * r


def family(R):
    R = mp.mpf(R)
    omega = mp.atanh(R) + R / (1 - R**2)
    # zeros bracketed on either side of the maximum
    r_plus = mp.findroot(lambda r: f(r, omega), (R + mp.mpf("1e-30"), 1 - mp.mpf("1e-30")), solver="anderson")
    r_minus = mp.findroot(lambda r: f(r, omega), (-1 + mp.mpf("1e-30"), mp.mpf("-1e-30")), solver="anderson")
    alpha = r_plus * mp.sqrt(1 - r_plus**2)
    xi_max = alpha * f(R, omega)
    tau_plus = 1 / xi_max
    grad_minus = alpha * mp.sqrt(1 - r_minus**2) * abs(-mp.atanh(r_minus) - r_minus / (1 - r_minus**2) + omega)
    tau_minus = grad_minus / xi_max
    lower_radius = alpha / (abs(r_minus) * mp.sqrt(1 - r_minus**2))
    return dict(R=R, omega=omega, r_minus=r_minus, r_plus=r_plus, alpha=alpha, xi_max=xi_max,
                tau_minus=tau_minus, tau_plus=tau_plus, grad_minus=grad_minus, lower_radius=lower_radius)


def lit(x):
    return mp.nstr(x, 20, min_fixed=-mp.inf, max_fixed=mp.inf) if x != 0 else "0.0"


def main():
    r_bar = mp.findroot(lambda r: 1 - r * mp.atanh(r), (mp.mpf("0.8"), mp.mpf("0.9")), solver="anderson")
    tau0 = 1 / (r_bar * mp.sqrt(1 - r_bar**2))
    print("#pragma once")
    print("// Generated by tests/oracles/generate.py; do not edit.")
    print()
    print("namespace oracle {")
    print()
    print(f"inline constexpr double kRBar = {lit(r_bar)};")
    print(f"inline constexpr double kTau0 = {lit(tau0)};")
    print()
    print("struct FamilyRow {")
    print("  double R, omega, r_minus, r_plus, alpha, xi_max, tau_minus, tau_plus, grad_minus, lower_radius;")
    print("};")
    print()
    print("inline constexpr FamilyRow kFamily[] = {")
    for k in range(10):
        row = family(mp.mpf(k) / 10)
        keys = ["R", "omega", "r_minus", "r_plus", "alpha", "xi_max", "tau_minus", "tau_plus", "grad_minus", "lower_radius"]
        print("    {" + ", ".join(lit(row[key]) for key in keys) + "},")
    print("};")
    print()
    print("}  // namespace oracle")


if __name__ == "__main__":
    main()
