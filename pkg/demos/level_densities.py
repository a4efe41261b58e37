"""One- and two-level densities of the classical ensembles against a Fejer test function."""
from satotate.ensembles import ENSEMBLES, BandLimitedTestFn, density_pairing

phi = BandLimitedTestFn(1.0)
for ens in ENSEMBLES:
    d = density_pairing(ens, 1, [phi], method="direct")
    f = density_pairing(ens, 1, [phi], method="fourier")
    print(f"{ens:7s} direct {d.value:.10f}  fourier {f.value:.10f}")

pair = [BandLimitedTestFn(1.0), BandLimitedTestFn(0.7)]
print("U 2-level:", density_pairing("U", 2, pair, method="fourier").value)
