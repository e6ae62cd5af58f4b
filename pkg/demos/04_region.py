"""The (p, n) region where the Kuga variety is known to be of relative general type."""

from kuga import dims

cells = dims.region_grid(41, 8)
primes = sorted({c.p for c in cells})
sym = {"rgt": "#", "unknown": "."}
for n in range(8, -1, -1):
    row = "".join(sym[dims.classify(p, n).status.value].rjust(3) for p in primes)
    print(f"n={n}", row)
print("   ", "".join(str(p).rjust(3) for p in primes))

print(dims.grid_to_csv(dims.region_grid(5, 3)))
print(dims.classify(2, 5).status.value)
