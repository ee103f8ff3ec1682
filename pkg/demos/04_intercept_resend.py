"""
Intercept and resend
====================

The eavesdropper captures the state on the first hop and forwards a fake
with the announced syndrome.  Because the fake shares the syndrome, the
receiver's zero-syndrome check cannot tell it apart; the dummies do the
detecting.
"""
from math import comb

from ueiqc import InterceptResend, NoAttack, SessionConfig, run_attack_campaign

trials = 20_000
for strategy in (NoAttack(), InterceptResend("uniform-coset"),
                 InterceptResend("copy-syndrome-representative")):
    cfg = SessionConfig(code="833", k_prime=1, seed=3, adversary=strategy)
    r = run_attack_campaign(cfg, trials)
    print(type(strategy).__name__, getattr(strategy, "spoof_policy", ""))
    for name in ("syndrome_passes", "coset_matches", "undetected", "extraction_successes"):
        lo, hi = r.interval(name)
        print(f"  {name:<22} {r.rate(name):.4f}  [{lo:.4f}, {hi:.4f}]")

print(f"\nreference: class match 1/64 = {1 / 64:.4f}, "
      f"dummies survive 1/4, position guess 1/C(3,1) = {1 / comb(3, 1):.4f}")
