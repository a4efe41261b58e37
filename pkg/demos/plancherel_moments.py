"""Three independent routes to the same Plancherel moment, plus the Satake picture behind them."""
from satotate.hecke import HeckeElement, convolve, degree, satake
from satotate.plancherel import kato_moment, moment_report
from satotate.symfunc import schur_expand

p = 2

# tau_(1,0) on GL(2): its Satake transform is sqrt(p) * (x1 + x2)
t = HeckeElement.basis((1, 0), p)
print("satake(tau_(1,0)) =", satake(t))
print("tau * tau =", convolve(t, t))
print("deg tau_(2,1,0) at p=3:", degree((2, 1, 0), 3))

for nu in [(2, 1, 0), (3, 0, 0), (3, 3, 0), (4, 3, 1, 0)]:
    rep = moment_report(nu, p)
    print(nu, "kato", kato_moment(nu, p), "agree", rep.agreement)

# a Schur function of the dominant weight is what the moment integrates
print(schur_expand((2, 1, 0)))
