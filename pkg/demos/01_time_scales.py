"""Walk through the four kinds of time scale and their jump operators."""

from fractions import Fraction as F

from chronofrac import CantorApprox, FiniteUnion, Reals, UniformGrid, parse_scale

# %% The integers and a shifted grid
Z = UniformGrid(1)
print("Z:      sigma(4) =", Z.sigma(4), " rho(4) =", Z.rho(4), " mu =", Z.mu(4))
G = parse_scale("hZ:1/3@1/6")
t = F(1, 2)
print(f"{G}: sigma({t}) = {G.sigma(t)}, mu = {G.mu(t)}")

# %% The real line has no jumps at all
R = Reals()
print("R:      sigma(7.25) =", R.sigma(7.25), " classes:", R.classify(7.25))

# %% A mixed scale: an interval, an isolated point, another interval
U = FiniteUnion([(0, 1), (F(3, 2), F(3, 2)), (2, 3)])
for t in (F(1, 2), 1, F(3, 2), 3):
    c = U.classify(t)
    print(f"{U}: t={t!s:>4}  sigma={U.sigma(t)!s:>4}  rho={U.rho(t)!s:>4}  "
          f"right_scattered={c.right_scattered}  left_scattered={c.left_scattered}  "
          f"in T^kappa={U.in_kappa(t)}")

# %% The Cantor construction: the left end of every removed gap jumps
# across it, so the graininess there is the gap width
C = CantorApprox(4)
for t in (F(1, 3), F(1, 9), F(7, 9), F(1, 27)):
    print(f"cantor:4  t={t!s:>5}  sigma={C.sigma(t)!s:>5}  mu={C.mu(t)}")
