"""
Troenpy next to entropy
=======================

Entropy measures how surprising a distribution is; troenpy measures how
common, or certain, its outcomes are. This script prints both for a few
distributions and checks the duality between the two information
quantities of a single outcome.
"""

import math

import numpy as np

from troenpy import entropy, negative_information, positive_information, troenpy

# A fair coin, a loaded coin and a near-certain coin.
for p in ([0.5, 0.5], [0.8, 0.2], [0.99, 0.01]):
    print(f"p={p!s:14}  entropy={entropy(p):.4f}  troenpy={troenpy(p):.4f}")

# For a uniform distribution over K outcomes troenpy is ln(K / (K - 1)):
# it shrinks as the outcomes get rarer, while entropy grows as ln K.
for K in (2, 3, 5, 10):
    u = np.full(K, 1.0 / K)
    print(f"K={K:2d}  entropy={entropy(u):.4f}  troenpy={troenpy(u):.4f}  ln(K/(K-1))={math.log(K / (K - 1)):.4f}")

# Positive information of an outcome is the negative information of its
# complement.
p = 0.3
print(positive_information(p), negative_information(1 - p))
