"""Smoke test for the fdszt extension module.

Build and run:

    maturin develop -m crates/py/Cargo.toml
    python crates/py/python/smoke_test.py
"""

import math

import fdszt


def main():
    # transform of [1, 2, 3, 4]
    coeffs = fdszt.forward_zt([1, 2, 3, 4])
    assert coeffs == [10 + 0j, -2 + 2j, -2 + 0j, -2 - 2j], coeffs
    assert [round(v) for v in fdszt.inverse_zt(coeffs)] == [1, 2, 3, 4]
    assert fdszt.quantize([255.5, 0.4, 128.0, 256.0]) == ([255, 0, 128, 255], [True, False, False, True])

    assert fdszt.select_coeff([287, 40 + 27j, 33, 40 - 27j]) == (1, 40)
    assert fdszt.write_bit(40, 0) == 32 and fdszt.write_bit(-2, 1) == -10
    assert fdszt.read_bit(-10) == 1

    stego_mask, offset = fdszt.embed_bit_in_mask([100, 50, 60, 77], 0)
    assert stego_mask == [96, 50, 64, 77] and offset == 0
    assert fdszt.extract_bit_from_mask(stego_mask) == 0
    try:
        fdszt.embed_bit_in_mask([0, 0, 0, 0], 1)
    except fdszt.EmbedFailedError:
        pass
    else:
        raise AssertionError("degenerate mask accepted")

    cover = fdszt.GrayImage(32, 32, bytes(60 + (i * 37) % 140 for i in range(32 * 32)))
    secret = fdszt.GrayImage(4, 4, bytes(range(0, 256, 16)))
    assert fdszt.capacity_bits(cover) == 256

    stego = fdszt.embed_image(cover, secret)
    assert fdszt.extract_image(stego) == secret
    assert fdszt.GrayImage.from_pgm(stego.to_pgm()) == stego

    report = fdszt.report(cover, stego)
    assert report.peak_mode == "Fixed255"
    assert report.psnr_db > 38.0 and report.image_fidelity > 0.999
    assert math.isinf(fdszt.psnr(cover, cover))

    try:
        fdszt.extract_image(cover)
    except fdszt.NoPayloadError:
        pass
    else:
        raise AssertionError("plain cover yielded a payload")

    try:
        fdszt.embed_image(secret, cover)
    except fdszt.CapacityError:
        pass
    else:
        raise AssertionError("oversized secret accepted")

    print(f"smoke test ok: {report!r}")


if __name__ == "__main__":
    main()
