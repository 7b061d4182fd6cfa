"""Small codes: distances, syndromes, decoding and the counting bounds."""
import numpy as np

from stabkit.codes import get_code, hamming_7_4, css_construct, verify_knill_laflamme, hamming_bound, singleton_bound
from stabkit.pauli import PauliOperator, paulis_of_weight

for name in ["five_qubit", "seven_qubit", "nine_qubit"]:
    code = get_code(name)
    print(f"{name}: [[{code.n},{code.k},{code.distance()}]]")

five = get_code("five_qubit")
e = PauliOperator.from_string("IIYII")
print("syndrome of", e, "=", five.syndrome(e))        # 4 bits, one per generator

# every single-qubit error has its own syndrome: the code is perfect
synd = {tuple(five.syndrome(p)) for p in paulis_of_weight(5, 1)}
print(len(synd), "distinct syndromes for 15 single-qubit errors")

# decode a batch of random weight-1 errors; nothing logical should survive
rng = np.random.default_rng(0)
errs = paulis_of_weight(5, 1)
pick = [errs[i] for i in rng.integers(0, len(errs), 8)]
ax, az = five.ideal_decode(np.array([p.x for p in pick]), np.array([p.z for p in pick]))
print("logical residue after decoding:", ax.ravel(), az.ravel())

# the seven-qubit code from two copies of the Hamming code
steane = css_construct(hamming_7_4(), hamming_7_4())
print(steane.n, steane.k, [str(g) for g in steane.generators][:3], "...")

nine = verify_knill_laflamme(get_code("nine_qubit"), [p for w in (0, 1) for p in paulis_of_weight(9, w)])
print("nine-qubit code corrects weight 1:", nine.is_code, "degenerate:", nine.is_degenerate)

print("Hamming bound [[5,1,3]]:", hamming_bound(5, 1, 1))
print("Singleton allows [[4,1,3]]?", bool(singleton_bound(4, 1, 3)))
