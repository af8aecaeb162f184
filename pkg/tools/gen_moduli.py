"""Regenerate src/singergq/_moduli.py (Conway polynomials, p**h <= 4096, h >= 2)."""
import pathlib

from singergq.gf import conway_polynomial, is_prime

LIMIT = 4096


def main():
    rows = []
    for p in range(2, 65):
        if not is_prime(p):
            continue
        h = 2
        while p**h <= LIMIT:
            rows.append(((p, h), conway_polynomial(p, h)))
            h += 1
    lines = [
        '"""Reduction polynomials for GF(p^h), h >= 2, p^h <= 4096.',
        "",
        "Conway polynomials, coefficients listed from the constant term up.",
        "Generated by tools/gen_moduli.py; do not edit by hand.",
        '"""',
        "",
        "MODULI = {",
    ]
    for key, poly in sorted(rows):
        lines.append(f"    {key}: {poly},")
    lines.append("}")
    out = pathlib.Path(__file__).resolve().parents[1] / "src" / "singergq" / "_moduli.py"
    out.write_text("\n".join(lines) + "\n")
    print(f"wrote {len(rows)} moduli")


if __name__ == "__main__":
    main()
