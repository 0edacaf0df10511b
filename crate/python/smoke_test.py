"""Smoke test for the asai_py extension.

Run after `maturin develop -m crates/python/Cargo.toml`, or after
`cargo build -p asai-py --release` (the built library is then loaded from
target/release).
"""

import importlib.util
import pathlib
import shutil
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent
DATA = ROOT / "data"


def load():
    try:
        import asai_py

        return asai_py
    except ImportError:
        pass
    for profile in ("release", "debug"):
        lib = ROOT / "target" / profile / "libasai_py.so"
        if lib.exists():
            tmp = pathlib.Path(tempfile.mkdtemp()) / "asai_py.so"
            shutil.copy(lib, tmp)
            spec = importlib.util.spec_from_file_location("asai_py", tmp)
            mod = importlib.util.module_from_spec(spec)
            spec.loader.exec_module(mod)
            return mod
    sys.exit("asai_py not found: build it with maturin or cargo first")


def main():
    ap = load()

    delta = ap.EllipticPacket.from_json((DATA / "delta.json").read_text())
    assert delta.label == "Delta" and delta.weight == 12
    assert delta.ap(2) == "-24"

    for l in (2, 3, 11, 19, 97):
        split, matched = delta.factor_check(5, l)
        assert matched is True, (l, split)
    assert delta.factor_check(5, 5)[1] is None

    bc = delta.base_change(5)
    assert bc.entry(11)[0] == "split"
    assert bc.asai_coefficients(4)[0] == "1"
    assert len(bc.euler_factor(3)) == 5

    chi = ap.DirichletCharacter(4, [1])
    assert chi.order == 2 and chi.eval(3) == "-1"
    try:
        ap.DirichletCharacter(4, [1, 1])
        raise AssertionError("bad exponents accepted")
    except ValueError:
        pass
    try:
        ap.EllipticPacket.from_json("{")
        raise AssertionError("malformed JSON accepted")
    except ValueError:
        pass

    probe = ap.pole_probe_zeta(100000)
    assert probe["verdict"] == "pole" and abs(probe["residue_estimate"] - 1) < 0.1

    twist = ap.EllipticPacket.from_json((DATA / "delta_psi4.json").read_text())
    probe = twist.base_change(5).pole_probe(1000, twist.distinguished_character(5))
    assert probe["verdict"] == "pole", probe

    kl = ap.KubotaLeopoldt(5, 0, 10)
    assert kl.pole_order == 1
    print("kl residue at p=5:", kl.residue_lift())

    katz = ap.EisensteinFamily.katz(4, 5, 60)
    flat = ap.EisensteinFamily.flat(4, 5, 60)
    assert flat.deplete().same_coefficients(katz.kappa_slice(True))
    assert ap.stabilization_check(2, 1, 5, 60, 10)[0]

    stub = ap.FamilyStub.from_json((DATA / "stub_delta_p29.json").read_text())
    assert stub.p == 29
    assert stub.trivial_zero()["structural_zero"]
    assert all(r[4] for r in stub.rows())

    assert ap.verify_zeta1()["verdict"]
    assert ap.verify_zeta1(3, ["2", "-1/3", "5", "7/2"])["verdict"]
    assert ap.verify_zeta2(2, 3, ["2", "-1/3", "5", "7/2"], -1, 1)["verdict"]
    ratio, rep = ap.depleted_ordinary_ratio()
    assert rep["verdict"], ratio

    print("asai_py smoke test: ok")


if __name__ == "__main__":
    main()
