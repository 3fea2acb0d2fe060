# First Hopf crossing (omega*, c*) from the plateau matching determinant in 40 digits.
# The determinant is built from exact eigenvectors of the constant-coefficient problems.
from mpmath import mp, findroot, mpc, matrix, exp, polyroots, det

mp.dps = 40


def roots(chi, c, lam):
    r = polyroots([-1, 0, -chi, c, -lam], maxsteps=200, extraprec=100)
    return sorted(r, key=lambda z: (-mp.re(z), -mp.im(z)))


def ev(nu, chi):
    return [1, nu, nu**2 + chi, nu * (nu**2 + chi)]


def plateau(lam, c, ell):
    rp = roots(1, c, lam)
    rm = roots(-1, c, lam)
    V = matrix(4, 4)
    E = matrix(4, 4)
    for j in range(4):
        e = ev(rp[j], 1)
        f = ev(rm[j], -1)
        for i in range(4):
            V[i, j] = e[i]
            E[i, j] = f[i]
    G = V**-1 * E
    for i in range(4):
        for j in range(2):
            G[i, j] *= exp(2 * ell * rp[i])
    return det(G) * exp(-2 * ell * (rp[0] + rp[1]))


s7 = mp.sqrt(7)
lamlin = (3 + s7) * mp.sqrt((2 + s7) / 96)
clin = 2 / (3 * mp.sqrt(6)) * (2 + s7) * mp.sqrt(s7 - 1)
mu = -mp.sqrt((s7 - 1) / 24)
ka = mp.sqrt((s7 + 3) / 8)
for ell in [10, 20, 40]:
    f = mp.pi**2 / (4 * mu * ell**2)
    lh = f * (-1 + 6 * (mu**2 + ka**2)) * ka
    ch = -f * (1 + 6 * (mu**2 - ka**2))
    F = lambda w, c: [mp.re(plateau(mpc(0, w), c, ell)), mp.im(plateau(mpc(0, w), c, ell))]
    w, c = findroot(F, (lamlin + lh, clin + ch))
    print(ell, "omega*", w, "c*", c)

# fixed-speed root used by the finite-difference comparison
print("ell=15 c=1.5 root", findroot(lambda l: plateau(l, mp.mpf(1.5), 15), (mpc(0.0059, 1.1179), mpc(0.006, 1.118), mpc(0.0058, 1.1178)), solver="muller"))
