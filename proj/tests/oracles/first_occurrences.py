#!/usr/bin/env python3
"""Independent oracle: first occurrence of every residue pattern [a,b,c] mod q
among consecutive sums of two squares E_n, E_{n+1}, E_{n+2} with E_n <= x.

Membership is decided by the prime-factorization criterion (every prime
3 mod 4 to an even power), computed with a smallest-prime-factor sieve, so it
shares no code path with the lattice-marking sieve of the library.

Usage: first_occurrences.py q x > fixture.csv
"""
import itertools
import sys

import numpy as np


def spf_table(limit):
    spf = np.zeros(limit + 1, dtype=np.int32)
    for p in range(2, int(limit**0.5) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    idx = np.nonzero(spf == 0)[0]
    spf[idx] = idx
    return spf


def is_sum_two_squares(n, spf):
    if n < 3:
        return True
    while n > 1:
        p = int(spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if p % 4 == 3 and e % 2 == 1:
            return False
    return True


def main():
    q, x = int(sys.argv[1]), int(sys.argv[2])
    limit = x + 10_000  # lookahead; gaps in E are far smaller at this size
    spf = spf_table(limit)
    members = [n for n in range(limit + 1) if is_sum_two_squares(n, spf)]
    first = {}
    for i in range(len(members) - 2):
        if members[i] > x:
            break
        key = tuple(m % q for m in members[i : i + 3])
        if key not in first:
            first[key] = (i + 1, members[i], members[i + 1], members[i + 2])
    print("pattern,n,E_n,E_n+1,E_n+2")
    for key in itertools.product(range(q), repeat=3):
        if key in first:
            n, e0, e1, e2 = first[key]
            print(f'"[{key[0]},{key[1]},{key[2]}]",{n},{e0},{e1},{e2}')
        else:
            print(f'"[{key[0]},{key[1]},{key[2]}]",none')


if __name__ == "__main__":
    main()
