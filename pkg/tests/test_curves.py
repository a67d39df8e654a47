import os

import pytest

from helpers import x25519_oracle
from purb import curve25519 as c25519
from purb import secp256k1 as k256
from purb.rng import seeded_rng

# Published test vectors for the 64-byte pair codec's maps:
# (x, y, preimage per branch or None).
K256_MAP_VECTORS = [
    (0xC27FB7A3283A7D3EC9F96421545EF6F58ACE7B7106C8A1B907C0AE8A7598159C,
     0xE05A060E839EF79FC0C1267CA17880C9584CDD34C05F969555482207E6851F2A,
     (0xC0AD127AA36824D65B1F5BE74DE1AA25BC4D5CBECEE154620A12682AFC87DF98,
      0xD40FD5BC519924848F13273B1D857CBA42D45E789EAA4E47F458B83ABD5F8D1C,
      0xDE6361417DEB440B3A30592443635CF9CF42F9B5F5B891C11E119F0971B570AC,
      0xD55135CE41BB4D055B3757F4AF1D6537137376D75270CAAEDA68382D25D00708)),
    (0xF5F74FAB3EBBBCFDDCAEF6CCD14EB934F9435A4E4A1ED2D875352C47306D6C2F,
     0xEA6A5B2AE109897D046E1504F7A382D61EB49A8AAE8852EF48E29466194D9E66,
     (None, None,
      0xE8362DF238E0405B4921874774F9EBCA36DFE21B1A49AE2D0FA23FD411A262A6,
      0x9E453426AC97315519D11D63C3BB27EE89A7EC855661DCE4E428F6CC0BE059CC)),
    (0x016A682D1DF4F869B32C48B0A9B442A1493949FB85D951D121C1143BD3D5C1AF,
     0x38D33FE5D3F9B4B982E37DFF7561428D47EF4DDF654BD95951B04E90A3BE50E7,
     (None, None, None, None)),
    (0x7AE96A2B657C07106E64479EAC3434E99CF0497512F58995C1396C28719501EE,
     0x4218F20AE6C646B363DB68605822FB14264CA8D2587FDD6FBC750D587E76A7EE,
     (None, None, None, None)),
    (0x1,
     0xBDE70DF51939B94C9C24979FA7DD04EBD9B3572DA7802290438AF2A681895441,
     (0xD3779B573CB17828AC118CFF74412AB5B84C86F8A92F48B8EFCBE4C70A675631,
      0xEA6F729DDC884123F0130AA0339BDA362166D034FE50D9D753BF0DDE7721FA3F,
      None, None)),
]

# (64-byte encoding hex, expected x, expected y parity)
K256_DECODE_VECTORS = [
    ("54cad227b2c98d5f7c788cfc3dafd652f58f69cfef632b822b35d0b0e24fc03a"
     "d28ca14b6f62d45379c53f70ee405ca92ce7b6f970831305f27dc41eb69de06e",
     0x11628903328891AE09D108D89243E47E109FE7B8BB1E2DF1A3AE9B0E7808549C, 0),
    ("717e63d771dbda6767d58f26ab5f549bd2d18acf59ff50775f4eb50ac0174df1"
     "7dd034c8ed0811615e3ebb36f8f33e09238e4da8f5019d3700784f37c1535394",
     0x7281150CEBC3D7B3BBB992F581BBCB9E304F8744F01998A71F5DE114F82291C4, 0),
    ("00" * 64,
     0x1B412E7A966D2C243DBC5B18B7F9BAF185BCFE4138960479641AB1E63B381E11, 1),
]


class TestSecp256k1Group:
    def test_generator_on_curve(self):
        assert k256.is_on_curve((k256.GX, k256.GY))

    def test_scalar_mult_matches_native(self):
        from cryptography.hazmat.primitives.asymmetric import ec

        rng = seeded_rng(11)
        for _ in range(10):
            k = int.from_bytes(rng.randbytes(32), "big") % k256.N or 1
            nums = ec.derive_private_key(k, ec.SECP256K1()).public_key().public_numbers()
            assert k256.scalar_mult(k) == (nums.x, nums.y)

    def test_order(self):
        assert k256.scalar_mult(k256.N + 1) == (k256.GX, k256.GY)


class TestSecp256k1Codec:
    @pytest.mark.parametrize("x,y,preimages", K256_MAP_VECTORS)
    def test_reverse_map_vectors(self, x, y, preimages):
        for branch, want in enumerate(preimages):
            got = k256.reverse_map(k256.Fe(x), k256.Fe(y), branch)
            if want is None:
                assert got is None
            else:
                assert got == k256.Fe(want)
                fx, fy = k256.forward_map(got)
                assert (fx.val, fy.val) == (x, y)

    @pytest.mark.parametrize("rep_hex,x,parity", K256_DECODE_VECTORS)
    def test_decode_vectors(self, rep_hex, x, parity):
        px, py = k256.unhide(bytes.fromhex(rep_hex))
        assert px == x
        assert py & 1 == parity

    def test_forward_map_total_at_zero(self):
        assert k256.is_on_curve(k256._fe_point(k256.forward_map(k256.Fe(0))))

    def test_preimage_uniqueness(self):
        rng = seeded_rng(12)
        for _ in range(30):
            u = k256.Fe(int.from_bytes(rng.randbytes(32), "big"))
            x, y = k256.forward_map(u)
            assert k256.is_on_curve((x.val, y.val))
            hits = [
                v
                for v in (k256.reverse_map(x, y, j) for j in range(4))
                if v is not None
            ]
            assert len(set(v.val for v in hits)) == len(hits)
            assert sum(v == u for v in hits) == 1

    def test_hide_unhide_roundtrip(self):
        rng = seeded_rng(13)
        for _ in range(40):
            pt = k256.scalar_mult(int.from_bytes(rng.randbytes(32), "big") % k256.N or 1)
            rep = k256.hide(pt, rng)
            assert len(rep) == 64
            assert k256.unhide(rep) == pt

    def test_unhide_total(self):
        for data in (b"\x00" * 64, b"\xff" * 64, os.urandom(64)):
            assert k256.is_on_curve(k256.unhide(data))

    def test_unhide_length_checked(self):
        with pytest.raises(ValueError):
            k256.unhide(b"\x00" * 63)


class TestCurve25519Codec:
    def test_fast_map_agrees_with_reference(self):
        rng = seeded_rng(14)
        for _ in range(80):
            r = c25519.Fe(int.from_bytes(rng.randbytes(32), "little") & ((1 << 254) - 1))
            assert c25519.map_to_curve(r) == c25519.map_to_curve_reference(r)

    def test_inverse_map_agrees_with_reference(self):
        rng = seeded_rng(15)
        done = 0
        while done < 60:
            r = c25519.Fe(int.from_bytes(rng.randbytes(32), "little") & ((1 << 254) - 1))
            u, v = c25519.map_to_curve(r)
            got = c25519.map_from_curve(u, v.is_negative())
            assert got == c25519.map_from_curve_reference(u, v.is_negative())
            assert got == abs(r)
            done += 1

    def test_hide_unhide_roundtrip(self):
        from cryptography.hazmat.primitives.asymmetric.x25519 import X25519PrivateKey

        rng = seeded_rng(16)
        done = 0
        while done < 60:
            sk = rng.randbytes(32)
            pk = X25519PrivateKey.from_private_bytes(sk).public_key().public_bytes_raw()
            rep = c25519.hide(pk, rng)
            if rep is None:
                continue
            assert len(rep) == 32
            assert c25519.unhide(rep) == pk
            done += 1

    def test_unhide_ignores_top_bits(self):
        rng = seeded_rng(17)
        rep = bytearray(rng.randbytes(32))
        base = c25519.unhide(bytes(rep))
        for bit in (254, 255):
            flipped = bytearray(rep)
            flipped[bit // 8] ^= 1 << (bit % 8)
            assert c25519.unhide(bytes(flipped)) == base

    def test_unhide_total(self):
        for data in (b"\x00" * 32, b"\xff" * 32, os.urandom(32)):
            out = c25519.unhide(data)
            assert len(out) == 32

    def test_unhide_length_checked(self):
        with pytest.raises(ValueError):
            c25519.unhide(b"\x00" * 31)

    def test_about_half_of_keys_encodable(self):
        from cryptography.hazmat.primitives.asymmetric.x25519 import X25519PrivateKey

        rng = seeded_rng(18)
        hits = 0
        n = 400
        for _ in range(n):
            pk = (
                X25519PrivateKey.from_private_bytes(rng.randbytes(32))
                .public_key()
                .public_bytes_raw()
            )
            hits += c25519.can_hide(pk)
        assert 0.4 < hits / n < 0.6


class TestNativeDhAgainstLadder:
    def test_x25519_matches_oracle(self):
        from cryptography.hazmat.primitives.asymmetric.x25519 import (
            X25519PrivateKey,
            X25519PublicKey,
        )

        rng = seeded_rng(19)
        for _ in range(10):
            sk = rng.randbytes(32)
            peer = (
                X25519PrivateKey.from_private_bytes(rng.randbytes(32))
                .public_key()
                .public_bytes_raw()
            )
            native = X25519PrivateKey.from_private_bytes(sk).exchange(
                X25519PublicKey.from_public_bytes(peer)
            )
            assert native == x25519_oracle(sk, peer)

    def test_secp256k1_ecdh_matches_ladder(self):
        from cryptography.hazmat.primitives.asymmetric import ec

        rng = seeded_rng(20)
        for _ in range(6):
            a = int.from_bytes(rng.randbytes(32), "big") % k256.N or 1
            b = int.from_bytes(rng.randbytes(32), "big") % k256.N or 1
            pub_b = k256.scalar_mult(b)
            shared = ec.derive_private_key(a, ec.SECP256K1()).exchange(
                ec.ECDH(),
                ec.EllipticCurvePublicNumbers(*pub_b, ec.SECP256K1()).public_key(),
            )
            want = k256.scalar_mult(a, pub_b)[0].to_bytes(32, "big")
            assert shared == want
