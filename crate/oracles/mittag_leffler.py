"""Reference values for the Mittag-Leffler tests (mpmath: high-precision series, Talbot inversion)."""
import mpmath as mp
mp.mp.dps = 40
def ml_series(a, z, dps=600):
    with mp.workdps(dps):
        a = mp.mpf(a); z = mp.mpf(z)
        s = mp.mpf(0); k = 0
        while True:
            t = z**k / mp.gamma(a*k+1)
            s += t
            if k > 20 and abs(t) < mp.mpf(10)**(-60): break
            k += 1
        return s
def ml_lap(a, x):
    # E_a(-x) = L^{-1}[s^{a-1}/(s^a + x)](1)
    a = mp.mpf(a); x = mp.mpf(x)
    return mp.invertlaplace(lambda s: s**(a-1)/(s**a + x), 1, method='talbot')
for a in ['0.25','0.5','0.75','0.9']:
    for z in ['-50','-20','-10','-5','-2','-1','-0.5','0.5','2','5']:
        zf = float(z)
        if zf > 0 or abs(zf) <= 5:
            v = ml_series(a, z)
        else:
            v = ml_lap(a, -mp.mpf(z))
        if a == '0.5':
            ref = mp.e**(mp.mpf(z)**2)*mp.erfc(-mp.mpf(z))
            assert abs(v-ref) < 1e-25*abs(ref), (a,z,v,ref)
        if zf < 0 and abs(zf) <= 5:
            w = ml_lap(a, -mp.mpf(z))
            assert abs(v-w) < 1e-20*abs(v), (a,z,v,w)
        print(f"    ({a}, {z}, {mp.nstr(v, 20)}),")
print(mp.nstr(1/mp.gamma(1.5),20), mp.nstr((mp.sqrt(2)-1)/mp.gamma(1.5),20), mp.nstr(2/mp.gamma(2.5),20), mp.nstr(1/mp.gamma(2.5),20))
print('g07', mp.nstr(mp.mpf(2)**(-0.3)/mp.gamma(0.7),20))
for x in ['0.1','0.5','1.5','2.5','3.7','5.5','9.9','0.01']:
    print('gamma', x, mp.nstr(mp.gamma(mp.mpf(x)),20))
