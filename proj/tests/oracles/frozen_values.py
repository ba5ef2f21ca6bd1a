"""Independent reference computations for the frozen expected values used in
the C++ unit tests. Run with: python3 tests/oracles/frozen_values.py

Nothing here imports project code; values are produced with numpy/scipy/sklearn
or by direct enumeration.
"""
import itertools
import math

import numpy as np
from scipy import stats
from sklearn.metrics import cohen_kappa_score


def entropy2(p):
    return -sum(x * math.log2(x) for x in p if x > 0)


print("entropy (0.5,.25,.125,.0625,.0625) =", repr(entropy2([0.5, 0.25, 0.125, 0.0625, 0.0625])))
print("uniform K=3 variance =", repr(sum(p * (k - 2) ** 2 for k, p in zip([1, 2, 3], [1 / 3] * 3))))
print("AU of (0.8,0.2) =", repr(entropy2([0.8, 0.2])), "EU =", repr(1 - entropy2([0.8, 0.2])))

# decompose_variance {(0.5,0.5,0),(0,0.5,0.5)}
m = np.array([[0.5, 0.5, 0], [0, 0.5, 0.5]])
ks = np.arange(1, 4)
mus = m @ ks
au = np.mean([(row * (ks - mu) ** 2).sum() for row, mu in zip(m, mus)])
eu = np.mean((mus - mus.mean()) ** 2)
pm = m.mean(0)
tu = (pm * (ks - pm @ ks) ** 2).sum()
print("var decomposition", au, eu, tu)

# QWK labels (1,2,3) preds (1,3,3)
print("qwk (1,2,3)/(1,3,3) =", repr(cohen_kappa_score([1, 2, 3], [1, 3, 3], weights="quadratic")))
# a second, non-trivial QWK case, K=4
y = [1, 2, 3, 4, 2, 3, 1, 4, 3, 2]
yh = [1, 3, 3, 4, 2, 2, 2, 4, 4, 2]
print("qwk case2 =", repr(cohen_kappa_score(y, yh, weights="quadratic", labels=[1, 2, 3, 4])))

# Friedman 4 rows x 3 treatments, with a tie in row 3
mat = np.array([[0.9, 0.5, 0.1],
                [0.8, 0.7, 0.2],
                [0.6, 0.6, 0.3],
                [0.2, 0.9, 0.4]])
r = stats.friedmanchisquare(*mat.T)
print("friedman stat =", repr(r.statistic), "p =", repr(r.pvalue))
ranks = np.array([stats.rankdata(-row) for row in mat])
print("friedman avg ranks =", ranks.mean(0))

# Wilcoxon exact, n=6 all positive
print("wilcoxon n=6 all positive:", stats.wilcoxon([1, 2, 3, 4, 5, 6], method="exact").pvalue)
a = [0.61, 0.55, 0.72, 0.43, 0.66, 0.58, 0.49, 0.70]
b = [0.52, 0.57, 0.60, 0.41, 0.59, 0.50, 0.51, 0.62]
# float differences leave partial ties in |d|; scipy's method="exact" ignores
# ties, so enumerate sign flips of the actual average ranks instead
d = np.asarray(a) - np.asarray(b)
r = stats.rankdata(np.abs(d))
w = r[d > 0].sum()
mu = r.sum() / 2
hits = sum(abs(sum(r[i] for i in range(len(r)) if m >> i & 1) - mu) >= abs(w - mu) - 1e-9 for m in range(1 << len(r)))
print("wilcoxon case2 enumerated:", repr(hits / (1 << len(r))))
a2 = list(range(1, 21))
b2 = [x + d for x, d in zip(a2, [-3, 1, -2, -5, 4, -1, -6, -2, -7, 3, -4, -8, -1, -9, 2, -3, -5, -6, -2, -4])]
print("wilcoxon n=20 normal (cc):", repr(stats.wilcoxon(a2, b2, method="approx", correction=True).pvalue))

# Holm
from statsmodels.stats.multitest import multipletests
print("holm:", multipletests([0.01, 0.04, 0.03], method="holm")[1])

# AUC (1,2,3,4) labels (0,1,0,1)
from sklearn.metrics import roc_auc_score
print("auc:", roc_auc_score([0, 1, 0, 1], [1, 2, 3, 4]))

# soft label K=5 y=2 alpha=0.2
def geo(y, K, a):
    G = sum(a ** abs(y - k) * (1 - a) for k in range(1, K + 1) if k != y)
    return [1 - a if k == y else a ** (abs(y - k) + 1) * (1 - a) / G for k in range(1, K + 1)]
print("geo K=5 y=2 a=0.2:", [repr(v) for v in geo(2, 5, 0.2)])

# ECE for a handful of records
P = np.array([[0.7, 0.2, 0.1], [0.3, 0.6, 0.1], [0.25, 0.25, 0.5], [0.05, 0.15, 0.8]])
Y = np.array([1, 3, 3, 3])
conf = P.max(1); pred = P.argmax(1) + 1; acc = (pred == Y).astype(float)
bins = np.minimum((conf * 10).astype(int), 9)
ece = sum(abs(acc[bins == b].mean() - conf[bins == b].mean()) * (bins == b).sum() / len(Y) for b in np.unique(bins))
nll = -np.mean(np.log(P[np.arange(4), Y - 1]))
brier = np.mean(((P - np.eye(3)[Y - 1]) ** 2).sum(1))
F = P.cumsum(1)[:, :-1]; Fy = np.eye(3)[Y - 1].cumsum(1)[:, :-1]
rps = np.mean(((F - Fy) ** 2).sum(1))
print("prob metrics case: nll", repr(nll), "brier", repr(brier), "rps", repr(rps), "ece", repr(ece))
