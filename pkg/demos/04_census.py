"""Which even lengths the eight families reach over GF(151^2).

Run: python demos/04_census.py   (about 20 s on one core; set GRSSD_THREADS to parallelize)
"""

from grssd import census as cz

for mode in cz.MODES:
    census = cz.enumerate_lengths(151, mode=mode)
    rep = cz.ratio(census)
    print(f"{mode:>8}: N = {rep.N} of {rep.universe}, ratio {rep.percent:.2f}%")
    print("          first-attributed per class:", census.first_attributed_counts())

# A witness is the first parameter tuple reaching a length.
census = cz.enumerate_lengths(151, classes=[6])
L = int(census.lengths[len(census.lengths) // 2])
print(f"length {L} from", census.witness_params(L).text())
