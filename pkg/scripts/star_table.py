"""(w * z)(1/2, 1/3) against the closed form, for a sweep of hbar."""
from fractions import Fraction

from pmstar import star
from pmstar.verify import closed_form_wz

p = (Fraction(1, 2), Fraction(1, 3))
print("hbar,value,closed_form,tail_bound,terms")
for h in (Fraction(1, 2), Fraction(1, 10), Fraction(1, 100), Fraction(1, 1000)):
    r = star.star_eval("w", "z", p, star.StarParams(hbar=h))
    print(f"{h},{r.value.real:.15f},{closed_form_wz(*p, h).real:.15f},{r.tail_bound:.2e},{r.terms}")
