"""High-precision reference values for the smooth test maps.

smooth_sine lift F(x) = 2x + eps sin(2 pi x)/(2 pi), eps = 0.5.
sine homeo H(x) = x + c sin(2 pi x)/(2 pi), c = 0.5.
"""
import mpmath as mp

mp.mp.dps = 40


def bisect(fn, y, lo, hi):
    lo, hi = mp.mpf(lo), mp.mpf(hi)
    for _ in range(200):
        mid = (lo + hi) / 2
        if fn(mid) < y:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def F(x):
    return 2 * x + mp.mpf("0.5") * mp.sin(2 * mp.pi * x) / (2 * mp.pi)


def H(x):
    return x + mp.mpf("0.5") * mp.sin(2 * mp.pi * x) / (2 * mp.pi)


print("smooth inverse_branch(1, 0.3) =", mp.nstr(bisect(F, mp.mpf("1.3"), 0.5, 1), 20))
print("smooth inverse_branch(0, 0.7) =", mp.nstr(bisect(F, mp.mpf("0.7"), 0, 0.5), 20))
print("smooth F^-3(0.8) =", mp.nstr(bisect(lambda x: F(F(F(x))), mp.mpf("0.8"), 0, 1), 20))
for t in ["1e-1", "1e-2", "1e-3"]:
    t = mp.mpf(t)
    x = mp.mpf("0.25")
    print("sine homeo qs(0.25, %s) =" % mp.nstr(t, 3), mp.nstr((H(x + t) - H(x)) / (H(x) - H(x - t)), 20))
# level-1 cut of smooth map F(x)=1
print("smooth cut =", mp.nstr(bisect(F, 1, 0, 1), 20))
# conjugated map lift at x=0.3: H^-1(2 H(0.3))
print("conjugated F(0.3) =", mp.nstr(bisect(H, 2 * H(mp.mpf("0.3")), 0, 1), 20))
