"""alpha(hbar) = sup_n (n!/|(-1/hbar)_n|)^(1/n) on a few sample values."""
from pmstar import star

for h in (1, 0.5, 0.1, 1j, 0.1j, -0.4, -0.75, 2 + 1j):
    print(f"{str(h):>10}  {star.alpha_for(h):.6f}")
