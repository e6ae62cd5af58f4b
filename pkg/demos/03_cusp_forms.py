"""Dimension counts: dim M_r, the Jacobi lower bound j(k, p), first good prime."""

from kuga import dims

print([dims.dim_M(r) for r in range(0, 40, 2)])

# rows k = 4..8, columns over the first primes
primes = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]
print("k\\p", *primes)
for k in range(4, 9):
    print(k, *[dims.jacobi_lower_bound(k, p) for p in primes])

# weight n + 2 is what the n-fold family needs
for k in range(3, 9):
    print("k =", k, "first prime:", dims.minimal_prime(k))

# note the dips for k = 4 at 37 -> 41 and 43 -> 47
