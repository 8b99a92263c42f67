#!/usr/bin/env python3
"""Independent reference values for the unit tests.

Everything here is computed with numpy/scipy from first principles (explicit
inverses, closed forms, brute-force enumeration), never through the C++
library. Run it to regenerate the constants frozen in tests/frozen_values.hpp.
"""
import math

import numpy as np


def header(title):
    print(f"\n== {title}")


header("rhs_eval 2x2")
A = np.diag([2.0, 1.0])
C = np.diag([1.0, 1.0])
B = np.array([[0.0, 1.0], [-1.0, 0.0]])
u = np.array([1.0, 2.0])
print(-A @ u - B @ u + C @ u)

header("energy_inner C=diag(1,2) k=0.5")
Cd = np.diag([1.0, 2.0])
k = 0.5
w, V = np.linalg.eigh(np.eye(2) + k * Cd)
Nk = V @ np.diag(np.sqrt(w)) @ V.T
uu = np.array([1.0, 1.0])
print((Nk @ uu) @ (Nk @ uu))

header("norm equivalence C=diag(0,4) k=2")
ev = np.linalg.eigvalsh(np.diag([0.0, 4.0]))
print(math.sqrt(1 + 2 * ev.min()), math.sqrt(1 + 2 * ev.max()))

header("step solve M=[[2,1],[-1,2]] b=(1,0)")
M = np.array([[2.0, 1.0], [-1.0, 2.0]])
Minv = np.array([[2.0, -1.0], [1.0, 2.0]]) / 5.0
print(Minv @ np.array([1.0, 0.0]))
header("imex step rhs=(2,0)")
print(Minv @ np.array([2.0, 0.0]))
header("explicit advection step")
u0 = np.array([1.0, 0.0])
rhs = u0 - B @ u0
print(np.linalg.solve(2 * np.eye(2), rhs))

header("scalar recursion u_{n+1}=(u_n+0.1)/1.1, N=10")
x = 0.0
for _ in range(10):
    x = (x + 0.1) / 1.1
print(repr(x))

header("Dirichlet Laplacian m=3 lambda_min")
h = 0.25
print(repr(4 / h**2 * 2 * math.sin(math.pi * h / 2) ** 2))


def laplacian(m):
    h = 1.0 / (m + 1)
    n = m * m
    L = np.zeros((n, n))
    for j in range(m):
        for i in range(m):
            r = j * m + i
            L[r, r] = 4 / h**2
            for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                ii, jj = i + di, j + dj
                if 0 <= ii < m and 0 <= jj < m:
                    L[r, jj * m + ii] = -1 / h**2
    return L


L3 = laplacian(3)
print("numpy eig min:", repr(np.linalg.eigvalsh(L3).min()))

header("contraction D1=diag(2,3) D2=I D3=[[0,1],[-1,0]]")
D = np.diag([2.0, 3.0]) + B
print(repr(np.linalg.svd(np.linalg.inv(D), compute_uv=False).max()))

header("truncation scalar e^{-t}, k=0.1")
k = 0.1
print(repr((math.exp(-k) - 1) / k + math.exp(-k)))

header("projector rank m=31 (bilinear coarse space)")
m = 31
mc = (m + 1) // 2 - 1
P1 = np.zeros((m, mc))
for I in range(mc):
    f = 2 * I + 1
    P1[f, I] = 1.0
    P1[f - 1, I] = 0.5
    P1[f + 1, I] = 0.5
Pi = np.kron(P1, P1)
PH = Pi @ np.linalg.solve(Pi.T @ Pi, Pi.T)
ev = np.linalg.eigvalsh((PH + PH.T) / 2)
print("rank:", int((ev > 0.5).sum()), " idempotence:", np.abs(PH @ PH - PH).max())

header("A - C margin, projection mode, m=31, eps=1e-4")
L = laplacian(31)
for eps0 in (1e-4, 1e-3):
    Am = (1e-4 + eps0) * L
    Cm = eps0 * PH @ L @ PH
    Cm = (Cm + Cm.T) / 2
    print(eps0, repr(np.linalg.eigvalsh(Am - Cm).min()))

header("boundary points with phi=1, m=31, theta=17deg")
m = 31
h = 1.0 / (m + 1)
th = math.radians(17.0)
nx, ny = -math.sin(th), math.cos(th)
pts = []
for s in range(1, m + 1):
    pts += [(s * h, 0.0), (s * h, 1.0), (0.0, s * h), (1.0, s * h)]
print(len(pts), sum(1 for (x, y) in pts if (x - 0.5) * nx + (y - 0.5) * ny > 0))

header("convergence ratios, scalar decay T=1")
ks = [0.1, 0.05, 0.025, 0.0125]
errs = []
for k in ks:
    N = round(1 / k)
    x = 1.0
    for _ in range(N):
        x = x / (1 + k)
    errs.append(abs(x - math.exp(-1)))
print(errs, [math.log2(errs[i] / errs[i + 1]) for i in range(3)])

header("convergence ratios, rotation T=1 (A=1e-12 I)")
errs = []
for k in ks:
    N = round(1 / k)
    x = np.array([1.0, 0.0])
    Mr = np.eye(2) + k * 1e-12 * np.eye(2) + k * B
    for _ in range(N):
        x = np.linalg.solve(Mr, x)
    ex = math.exp(-1e-12) * np.array([math.cos(1), math.sin(1)])
    errs.append(np.linalg.norm(x - ex))
print(errs, [math.log2(errs[i] / errs[i + 1]) for i in range(3)])

header("step contraction, projection mode, m=31, k=10")
m = 31
h = 1.0 / (m + 1)
n = m * m
Bm = np.zeros((n, n))
bx, by = math.cos(th), math.sin(th)
for j in range(m):
    for i in range(m):
        r = j * m + i
        if i + 1 < m: Bm[r, r + 1] += bx / (2 * h)
        if i - 1 >= 0: Bm[r, r - 1] -= bx / (2 * h)
        if j + 1 < m: Bm[r, r + m] += by / (2 * h)
        if j - 1 >= 0: Bm[r, r - m] -= by / (2 * h)
for eps0 in (1e-4, 1e-3):
    k = 10.0
    Am = (1e-4 + eps0) * L
    Cm = eps0 * PH @ L @ PH
    Cm = (Cm + Cm.T) / 2
    w, V = np.linalg.eigh(np.eye(n) + k * Cm)
    Nk = V @ np.diag(np.sqrt(np.clip(w, 0, None))) @ V.T
    F = Nk @ np.linalg.solve(np.eye(n) + k * Am + k * Bm, Nk)
    print(eps0, repr(np.linalg.svd(F, compute_uv=False).max()))
