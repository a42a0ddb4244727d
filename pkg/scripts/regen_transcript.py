#!/usr/bin/env python3
"""Regenerate the W-1 worked transcript by plain modular arithmetic.

This script is an independent oracle: it never imports the abpre package.
Every value is computed directly from exponent bookkeeping mod p = 13, so
the numbers frozen into tests/test_scheme.py and tests/test_acceptance.py
can be audited by eye or by rerunning this file.

Fixed tape: alpha=3, a=2, g2 = g^7, h_A = g^4, h_B = g^5, t=6,
s=5, v=(5,3), r=(1,2), d=4, t1=3, v'=(11), r'=(6), z=5, m = gt^9.
Policy W1 = "A AND B" -> M1 = [[1,1],[0,-1]], rho1 = (A, B).
Policy W2 = "B" -> M2 = [[1]], rho2 = (B,).
"""

p = 13

alpha, a = 3, 2
g2 = 7                      # exponent of the second generator
h = {"A": 4, "B": 5}        # exponents of the attribute elements
t = 6                       # keygen randomness
s, y2 = 5, 3                # encrypt secret and share vector tail
r1, r2 = 1, 2               # encrypt row randomness
d, t1 = 4, 3                # rkgen randomness
rp1 = 6                     # reencrypt row randomness
z = 5                       # transform blinding
m = 9                       # message exponent: m = gt^9


def inv(x):
    return pow(x, p - 2, p)


out = {}

# ---- Setup ----
out["e_gg_alpha"] = alpha % p
out["g_a"] = a % p
out["h_A"], out["h_B"] = h["A"], h["B"]

# ---- KeyGen (attrs {A, B}) ----
K = (alpha + a * t) % p
L = t % p
K_A = h["A"] * t % p
K_B = h["B"] * t % p
out.update(K=K, L=L, K_A=K_A, K_B=K_B)

# ---- Encrypt (m, W1, reencryptable) ----
M1 = [[1, 1], [0, -1]]
v = [s, y2]
lam = [sum(vj * Mij for vj, Mij in zip(v, row)) % p for row in M1]
C = (m + alpha * s) % p
C_prime = s % p
C_hat = g2 * s % p
C1 = (a * lam[0] - h["A"] * r1) % p
D1 = r1 % p
C2 = (a * lam[1] - h["B"] * r2) % p
D2 = r2 % p
out.update(lam1=lam[0], lam2=lam[1], C=C, C_prime=C_prime, C_hat=C_hat,
           C1=C1, D1=D1, C2=C2, D2=D2)

# ---- Decrypt level 1 (I = {1,2}, omega = (1,1) for M1) ----
pair_Cp_K = C_prime * K % p
prod = ((C1 * L + D1 * K_A) + (C2 * L + D2 * K_B)) % p
blind1 = (pair_Cp_K - prod) % p
out.update(pair_Cp_K=pair_Cp_K, l1_product=prod, l1_blinding=blind1,
           l1_message=(C - blind1) % p)

# ---- RKGen (delegatee attrs {B}) ----
K_p = (K + g2 * a * d) % p
L_p = (L + g2 * d) % p
K_pA = (K_A + g2 * d) % p
K_pB = (K_B + g2 * d) % p
rk_scalar = a * d * t1 % p
AK = g2 * d % p
L_dd = inv(t1)
K_ddB = h["B"] * inv(t1) % p
out.update(K_p=K_p, L_p=L_p, K_pA=K_pA, K_pB=K_pB, rk_scalar=rk_scalar,
           AK=AK, L_dd=L_dd, K_ddB=K_ddB)

# ---- Reencrypt (W2 = "B", M2 = [[1]]) ----
pair_Cp_Kp = C_prime * K_p % p
prod2 = ((C1 * L_p + D1 * K_pA) + (C2 * L_p + D2 * K_pB)) % p
T0 = (pair_Cp_Kp - prod2) % p
P = ((C1 + D1) + (C2 + D2)) % p
lam_p1 = rk_scalar  # v' = (rk_scalar,), M2 = [[1]]
C_p1 = (-C_hat * lam_p1 - h["B"] * rp1) % p
D_p1 = rp1 % p
out.update(T0=T0, P=P, lam_p1=lam_p1, C_p1=C_p1, D_p1=D_p1)

# ---- Decrypt level 2 (I2 = {1}, omega' = (1)) ----
J = (C_p1 * L_dd + D_p1 * K_ddB) % p
pair_P_AK = P * AK % p
blind2 = (T0 + pair_P_AK + J) % p
out.update(J=J, pair_P_AK=pair_P_AK, l2_blinding=blind2,
           l2_message=(C - blind2) % p)

# ---- Transform (z = 5) ----
zinv = inv(z)
L_tk = L_dd * zinv % p
K_tkB = K_ddB * zinv % p
T1 = (C_p1 * L_tk + D_p1 * K_tkB) % p
T0_full = (T0 + pair_P_AK) % p
final = (C - (T0_full + T1 * z)) % p
out.update(zinv=zinv, L_tk=L_tk, K_tkB=K_tkB, T1=T1, T0_full=T0_full,
           outsourced_message=final)

if __name__ == "__main__":
    width = max(len(k) for k in out)
    for key, val in out.items():
        print(f"{key:<{width}}  {val}")
    assert out["l1_blinding"] == alpha * s % p
    assert out["l2_blinding"] == alpha * s % p
    assert out["l1_message"] == m
    assert out["l2_message"] == m
    assert out["outsourced_message"] == m
    print("\nall decrypt paths recover m = gt^%d" % m)
