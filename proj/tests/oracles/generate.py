"""Reference values frozen into the unit tests.

Everything here uses dense numpy/scipy linear algebra or root finding, not the
algorithms under test. Run with python3 and paste the printed values.
"""
import numpy as np
from scipy import linalg, optimize

np.set_printoptions(precision=17)


def show(name, v):
    v = np.atleast_1d(v)
    print(f"{name} = {{{', '.join(repr(float(x)) for x in v)}}}")


def volterra(n):
    h = 1.0 / n
    return h * np.tril(np.ones((n, n)))


# Shifted and normal solves, n = 4.
A = volterra(4)
b = np.array([1.0, -2.0, 0.5, 3.0])
show("volterra_shifted", np.linalg.solve(A + 0.3 * np.eye(4), b))
show("volterra_normal", np.linalg.solve(A @ A.T + 0.07 * np.eye(4), b))

# Principal matrix square root and quarter power, n = 8.
A8 = volterra(8)
v8 = np.array([1.0, 2.0, -1.0, 0.5, 0.0, 3.0, -2.0, 1.5])
show("frac_half", np.real(linalg.fractional_matrix_power(A8, 0.5) @ v8))
show("frac_quarter", np.real(linalg.fractional_matrix_power(A8, 0.25) @ v8))

# Elliptic model -u'' + xi(u) = q on 5 interior nodes, h = 1/6.
n = 5
h = 1.0 / (n + 1)
K = (np.diag(2 * np.ones(n)) - np.diag(np.ones(n - 1), 1) - np.diag(np.ones(n - 1), -1)) / h**2
q = np.array([1.0, 4.0, -2.0, 3.0, 0.5]) * 10
show("elliptic_linear", np.linalg.solve(K + np.eye(n), q))
sol = optimize.fsolve(lambda u: K @ u + u**3 - q, np.zeros(n), xtol=1e-15)
show("elliptic_cubic", sol)
sol = optimize.fsolve(lambda u: K @ u + np.arctan(u) - q, np.zeros(n), xtol=1e-15)
show("elliptic_arctan", sol)


# Lavrentiev solution for the cubic model: F(x) + alpha (x - xbar) = y.
def F(x):
    return optimize.fsolve(lambda u: K @ u + u**3 - x, np.zeros(n), xtol=1e-15)


y = np.array([0.2, 0.5, 0.4, 0.1, -0.1])
xbar = np.array([1.0, 1.0, 0.0, 0.0, 1.0])
alpha = 0.05
x = optimize.fsolve(lambda x: F(x) + alpha * (x - xbar) - y, xbar, xtol=1e-14)
show("lavrentiev_cubic", x)

# Theta^{-1}(delta^2) for Theta(a) = a^2 Psi(a).
mu = 0.25
e = mu / (1 - mu)
holder = lambda a: a * a * (1 - mu) * mu**e * a**e
show("theta_inv_holder", optimize.brentq(lambda la: np.log(holder(np.exp(la))) - 2 * np.log(1e-3), -40, 4, xtol=1e-15))
log_psi = lambda a: a * a / -np.log(a)
show("theta_inv_log", optimize.brentq(lambda la: np.log(log_psi(np.exp(la))) - 2 * np.log(1e-2), -40, -1e-12, xtol=1e-15))

# Distance function for A = diag(a) on a grid with h = 1/4.
a = np.array([1.0, 0.5, 0.1, 0.01])
el = np.ones(4)
hw = 0.25


def theta(lam):
    return hw * np.sum(a**2 * el**2 / (a**2 + lam) ** 2)


def dist(lam):
    return np.sqrt(hw * np.sum(lam**2 * el**2 / (a**2 + lam) ** 2))


out = []
for R in [0.5, 1.0, 3.0, 10.0]:
    ll = optimize.brentq(lambda t: np.log(theta(np.exp(t))) - 2 * np.log(R), np.log(1e-14), np.log(1e6), xtol=1e-14)
    out.append(dist(np.exp(ll)))
show("diag_distance", out)
