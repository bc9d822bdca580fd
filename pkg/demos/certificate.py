"""Build a Bohr-inequality certificate, save it, and re-check it on fresh functions.

Run:  python3 demos/certificate.py [out.json]
"""

import sys

from bohrlab.bases import FaberSegment, Monomial
from bohrlab.certify import certify, load_certificate, save_certificate, verify_certificate

out = sys.argv[1] if len(sys.argv) > 1 else "certificate.json"

for B in (Monomial(1), Monomial(2), FaberSegment()):
    c = certify(B, 1.0, corpus_size=100)
    print(f"{type(B).__name__:>12} d={B.dimension}: C={c.C:.4f} r1={c.r1:g} R={c.R:.4f} "
          f"shift={c.shift_needed} worst slack={c.worst_slack:.3e}")

cert = certify(Monomial(1), 1.0)
save_certificate(cert, out)
back, _ = load_certificate(out)
v = verify_certificate(back, seed=12345)
print(f"\nsaved to {out}; fresh corpus: {v.check.checked} functions, worst slack {v.check.worst_slack:.3e}, "
      f"ok={v.ok}")
