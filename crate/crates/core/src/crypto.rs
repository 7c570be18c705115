//! Keyed functions f1–f5 and the derived SMAC / EK primitives.
//!
//! The abstract AKA functions are instantiated with MILENAGE (3GPP TS
//! 35.206) so that published conformance vectors apply; see
//! [`conformance`]. On top of them sit the two signalling primitives:
//!
//! - `smac(K, SQN)` — a 64-bit MAC over the sequence number, computed as
//!   f1 with an all-zero challenge and AMF 0xFFFF. Normal vector
//!   generation rejects an all-zero challenge and never uses that AMF, so
//!   the two f1 input domains can never collide.
//! - `ek(K, SQN)` — a 48-bit concealment key, computed as f5 over the
//!   sequence number padded with a fixed constant.

use aes::cipher::{generic_array::GenericArray, BlockEncrypt, KeyInit};
use aes::Aes128;
use std::fmt;

/// AMF value used for every normal authentication vector.
pub const NORMAL_AMF: Amf = Amf(0x0000);

/// AMF value reserved for the SMAC domain; never used in a vector.
pub const SMAC_AMF: Amf = Amf(0xFFFF);

/// Pad byte appended to SQN when deriving EK.
pub const EK_PAD_BYTE: u8 = 0xA5;

/// 128-bit long-term subscriber key. Never serialized into traces.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct SubscriberKey(pub [u8; 16]);

impl fmt::Debug for SubscriberKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SubscriberKey(..)")
    }
}

/// 48-bit sequence number.
///
/// Strictly increasing per subscriber on the network side; the USIM
/// stores the highest value it has accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sqn(u64);

impl Sqn {
    pub const MAX: u64 = (1 << 48) - 1;

    /// Wraps a counter value; values above 48 bits are rejected.
    pub fn new(value: u64) -> Option<Self> {
        (value <= Self::MAX).then_some(Self(value))
    }

    pub const ZERO: Sqn = Sqn(0);

    pub fn value(self) -> u64 {
        self.0
    }

    /// The successor, or `None` on 48-bit wrap.
    pub fn next(self) -> Option<Self> {
        (self.0 < Self::MAX).then(|| Self(self.0 + 1))
    }

    /// Big-endian 6-byte form, as carried in AUTN.
    pub fn to_bytes(self) -> [u8; 6] {
        let b = self.0.to_be_bytes();
        [b[2], b[3], b[4], b[5], b[6], b[7]]
    }

    pub fn from_bytes(bytes: [u8; 6]) -> Self {
        let mut b = [0u8; 8];
        b[2..].copy_from_slice(&bytes);
        Self(u64::from_be_bytes(b))
    }
}

/// 16-bit authentication management field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Amf(pub u16);

impl Amf {
    pub fn to_bytes(self) -> [u8; 2] {
        self.0.to_be_bytes()
    }

    pub fn from_bytes(bytes: [u8; 2]) -> Self {
        Self(u16::from_be_bytes(bytes))
    }
}

fn xor16(a: &mut [u8; 16], b: &[u8; 16]) {
    for i in 0..16 {
        a[i] ^= b[i];
    }
}

fn rotate_left(block: &[u8; 16], bits: usize) -> [u8; 16] {
    // Rotation amounts are whole bytes for every MILENAGE constant.
    debug_assert_eq!(bits % 8, 0);
    let shift = (bits / 8) % 16;
    let mut out = [0u8; 16];
    for i in 0..16 {
        out[i] = block[(i + shift) % 16];
    }
    out
}

/// Derives OPc = OP XOR E_K(OP).
pub fn compute_opc(k: &SubscriberKey, op: &[u8; 16]) -> [u8; 16] {
    let cipher = Aes128::new(GenericArray::from_slice(&k.0));
    let mut block = GenericArray::clone_from_slice(op);
    cipher.encrypt_block(&mut block);
    let mut opc: [u8; 16] = block.into();
    xor16(&mut opc, op);
    opc
}

/// MILENAGE context for one (K, OPc) pair.
#[derive(Clone)]
pub struct Milenage {
    cipher: Aes128,
    opc: [u8; 16],
}

impl fmt::Debug for Milenage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Milenage(..)")
    }
}

impl Milenage {
    pub fn new(k: &SubscriberKey, opc: [u8; 16]) -> Self {
        Self {
            cipher: Aes128::new(GenericArray::from_slice(&k.0)),
            opc,
        }
    }

    pub fn new_with_op(k: &SubscriberKey, op: &[u8; 16]) -> Self {
        Self::new(k, compute_opc(k, op))
    }

    fn encrypt(&self, mut block: [u8; 16]) -> [u8; 16] {
        let ga = GenericArray::from_mut_slice(&mut block);
        self.cipher.encrypt_block(ga);
        block
    }

    fn temp(&self, rand: &[u8; 16]) -> [u8; 16] {
        let mut t = *rand;
        xor16(&mut t, &self.opc);
        self.encrypt(t)
    }

    /// OUT_n = E_K(rot(TEMP XOR OPc, r_n) XOR c_n) XOR OPc, for n in 2..=5.
    fn out_n(&self, rand: &[u8; 16], rot_bits: usize, c_last: u8) -> [u8; 16] {
        let mut block = self.temp(rand);
        xor16(&mut block, &self.opc);
        let mut block = rotate_left(&block, rot_bits);
        block[15] ^= c_last;
        let mut out = self.encrypt(block);
        xor16(&mut out, &self.opc);
        out
    }

    /// f1: 64-bit network authentication MAC over (RAND, SQN, AMF).
    pub fn f1(&self, rand: &[u8; 16], sqn: Sqn, amf: Amf) -> [u8; 8] {
        let mut in1 = [0u8; 16];
        in1[0..6].copy_from_slice(&sqn.to_bytes());
        in1[6..8].copy_from_slice(&amf.to_bytes());
        in1[8..14].copy_from_slice(&sqn.to_bytes());
        in1[14..16].copy_from_slice(&amf.to_bytes());
        xor16(&mut in1, &self.opc);
        let mut block = rotate_left(&in1, 64);
        xor16(&mut block, &self.temp(rand));
        // c1 is all-zero
        let mut out = self.encrypt(block);
        xor16(&mut out, &self.opc);
        out[0..8].try_into().unwrap()
    }

    /// f2: 64-bit expected response.
    pub fn f2(&self, rand: &[u8; 16]) -> [u8; 8] {
        self.out_n(rand, 0, 0x01)[8..16].try_into().unwrap()
    }

    /// f3: 128-bit cipher key.
    pub fn f3(&self, rand: &[u8; 16]) -> [u8; 16] {
        self.out_n(rand, 32, 0x02)
    }

    /// f4: 128-bit integrity key.
    pub fn f4(&self, rand: &[u8; 16]) -> [u8; 16] {
        self.out_n(rand, 64, 0x04)
    }

    /// f5: 48-bit anonymity key masking SQN in AUTN.
    pub fn f5(&self, rand: &[u8; 16]) -> [u8; 6] {
        self.out_n(rand, 0, 0x01)[0..6].try_into().unwrap()
    }

    /// Sequence-MAC: the 64-bit change signal over SQN.
    ///
    /// f1 with an all-zero challenge and the reserved AMF, an input pair
    /// normal vector generation can never produce.
    pub fn smac(&self, sqn: Sqn) -> [u8; 8] {
        self.f1(&[0u8; 16], sqn, SMAC_AMF)
    }

    /// 48-bit concealment key for the embedded MSIN.
    ///
    /// f5 over SQN padded to one block with a fixed constant, a data
    /// input distinct from any challenge-derived f5 use.
    pub fn ek(&self, sqn: Sqn) -> [u8; 6] {
        let mut data = [EK_PAD_BYTE; 16];
        data[0..6].copy_from_slice(&sqn.to_bytes());
        self.f5(&data)
    }
}

pub mod conformance {
    //! Published MILENAGE design-conformance test sets (3GPP TS 35.207 /
    //! 35.208) and a runner shared by the test suite and the CLI.

    use super::*;

    /// One design-conformance test set, all fields hex-encoded.
    pub struct TestSet {
        pub name: &'static str,
        pub k: &'static str,
        pub rand: &'static str,
        pub sqn: &'static str,
        pub amf: &'static str,
        pub op: &'static str,
        pub opc: &'static str,
        pub f1: &'static str,
        pub f2: &'static str,
        pub f3: &'static str,
        pub f4: &'static str,
        pub f5: &'static str,
    }

    pub const TEST_SETS: &[TestSet] = &[
        TestSet {
            name: "set-1",
            k: "465b5ce8b199b49faa5f0a2ee238a6bc",
            rand: "23553cbe9637a89d218ae64dae47bf35",
            sqn: "ff9bb4d0b607",
            amf: "b9b9",
            op: "cdc202d5123e20f62b6d676ac72cb318",
            opc: "cd63cb71954a9f4e48a5994e37a02baf",
            f1: "4a9ffac354dfafb3",
            f2: "a54211d5e3ba50bf",
            f3: "b40ba9a3c58b2a05bbf0d987b21bf8cb",
            f4: "f769bcd751044604127672711c6d3441",
            f5: "aa689c648370",
        },
        TestSet {
            name: "set-2",
            k: "fec86ba6eb707ed08905757b1bb44b8f",
            rand: "9f7c8d021accf4db213ccff0c7f71a6a",
            sqn: "9d0277595ffc",
            amf: "725c",
            op: "dbc59adcb6f9a0ef735477b7fadf8374",
            opc: "1006020f0a478bf6b699f15c062e42b3",
            f1: "9cabc3e99baf7281",
            f2: "8011c48c0c214ed2",
            f3: "5dbdbb2954e8f3cde665b046179a5098",
            f4: "59a92d3b476a0443487055cf88b2307b",
            f5: "33484dc2136b",
        },
        TestSet {
            name: "set-3",
            k: "9e5944aea94b81165c82fbf9f32db751",
            rand: "ce83dbc54ac0274a157c17f80d017bd6",
            sqn: "0b604a81eca8",
            amf: "9e09",
            op: "223014c5806694c007ca1eeef57f004f",
            opc: "a64a507ae1a2a98bb88eb4210135dc87",
            f1: "74a58220cba84c49",
            f2: "f365cd683cd92e96",
            f3: "e203edb3971574f5a94b0d61b816345d",
            f4: "0c4524adeac041c4dd830d20854fc46b",
            f5: "f0b9c08ad02e",
        },
        TestSet {
            name: "set-4",
            k: "4ab1deb05ca6ceb051fc98e77d026a84",
            rand: "74b0cd6031a1c8339b2b6ce2b8c4a186",
            sqn: "e880a1b580b6",
            amf: "9f07",
            op: "2d16c5cd1fdf6b22383584e3bef2a8d8",
            opc: "dcf07cbd51855290b92a07a9891e523e",
            f1: "49e785dd12626ef2",
            f2: "5860fc1bce351e7e",
            f3: "7657766b373d1c2138f307e3de9242f9",
            f4: "1c42e960d89b8fa99f2744e0708ccb53",
            f5: "31e11a609118",
        },
        TestSet {
            name: "set-5",
            k: "6c38a116ac280c454f59332ee35c8c4f",
            rand: "ee6466bc96202c5a557abbeff8babf63",
            sqn: "414b98222181",
            amf: "4464",
            op: "1ba00a1a7c6700ac8c3ff3e96ad08725",
            opc: "3803ef5363b947c6aaa225e58fae3934",
            f1: "078adfb488241a57",
            f2: "16c8233f05a0ac28",
            f3: "3f8c7587fe8e4b233af676aede30ba3b",
            f4: "a7466cc1e6b2a1337d49d3b66e95d7b4",
            f5: "45b0f69ab06c",
        },
    ];

    fn unhex<const N: usize>(s: &str) -> [u8; N] {
        let v = hex::decode(s).expect("test set hex");
        v.try_into().expect("test set width")
    }

    /// Outcome of one conformance vector comparison.
    #[derive(Debug, Clone, PartialEq, Eq)]
    pub struct VectorResult {
        pub set: &'static str,
        pub function: &'static str,
        pub ok: bool,
    }

    /// Runs every test set; `corrupt_opc` flips a bit in each derived OPc
    /// first (negative-control hook; a healthy build must then fail f1).
    pub fn run(corrupt_opc: bool) -> Vec<VectorResult> {
        let mut results = Vec::new();
        for set in TEST_SETS {
            let key = SubscriberKey(unhex(set.k));
            let mut opc = compute_opc(&key, &unhex(set.op));
            results.push(VectorResult {
                set: set.name,
                function: "opc",
                ok: opc == unhex::<16>(set.opc),
            });
            if corrupt_opc {
                opc[0] ^= 0x80;
            }
            let m = Milenage::new(&key, opc);
            let rand: [u8; 16] = unhex(set.rand);
            let sqn = Sqn::from_bytes(unhex(set.sqn));
            let amf = Amf::from_bytes(unhex(set.amf));
            let checks: [(&'static str, bool); 5] = [
                ("f1", m.f1(&rand, sqn, amf) == unhex::<8>(set.f1)),
                ("f2", m.f2(&rand) == unhex::<8>(set.f2)),
                ("f3", m.f3(&rand) == unhex::<16>(set.f3)),
                ("f4", m.f4(&rand) == unhex::<16>(set.f4)),
                ("f5", m.f5(&rand) == unhex::<6>(set.f5)),
            ];
            for (function, ok) in checks {
                results.push(VectorResult {
                    set: set.name,
                    function,
                    ok,
                });
            }
        }
        results
    }

    /// True iff every vector in every set matches.
    pub fn all_pass() -> bool {
        run(false).iter().all(|r| r.ok)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn milenage_conformance_vectors() {
        for r in conformance::run(false) {
            assert!(r.ok, "{} {} mismatch", r.set, r.function);
        }
    }

    #[test]
    fn corrupted_opc_is_caught_by_f1() {
        let results = conformance::run(true);
        assert!(results.iter().any(|r| r.function == "f1" && !r.ok));
    }

    #[test]
    fn sqn_bytes_round_trip() {
        let s = Sqn::new(0x0123_4567_89AB).unwrap();
        assert_eq!(s.to_bytes(), [0x01, 0x23, 0x45, 0x67, 0x89, 0xAB]);
        assert_eq!(Sqn::from_bytes(s.to_bytes()), s);
        assert!(Sqn::new(Sqn::MAX).unwrap().next().is_none());
        assert!(Sqn::new(1 << 48).is_none());
    }

    fn test_context() -> Milenage {
        let k = SubscriberKey([0x10; 16]);
        Milenage::new_with_op(&k, &[0x3A; 16])
    }

    #[test]
    fn f1_is_deterministic() {
        let m = test_context();
        let rand = [0x55u8; 16];
        let sqn = Sqn::new(7).unwrap();
        assert_eq!(m.f1(&rand, sqn, NORMAL_AMF), m.f1(&rand, sqn, NORMAL_AMF));
        assert_eq!(m.smac(sqn), m.smac(sqn));
        assert_eq!(m.ek(sqn), m.ek(sqn));
    }

    #[test]
    fn f5_width_is_48_bits() {
        let m = test_context();
        let ak = m.f5(&[9u8; 16]);
        assert_eq!(ak.len(), 6);
    }

    #[test]
    fn distinct_rand_gives_distinct_ak() {
        let m = test_context();
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..100 {
            let a: [u8; 16] = rng.gen();
            let b: [u8; 16] = rng.gen();
            if a != b {
                assert_ne!(m.f5(&a), m.f5(&b));
            }
        }
    }

    fn hamming64(a: [u8; 8], b: [u8; 8]) -> u32 {
        u64::from_be_bytes(a).bitxor_count(u64::from_be_bytes(b))
    }

    trait BitXorCount {
        fn bitxor_count(self, other: u64) -> u32;
    }
    impl BitXorCount for u64 {
        fn bitxor_count(self, other: u64) -> u32 {
            (self ^ other).count_ones()
        }
    }

    #[test]
    fn f1_avalanche_on_rand_bits() {
        // Flip one random bit of RAND; the MAC should change about half
        // its bits. Accept a mean in [24, 40] of 64.
        let m = test_context();
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        let sqn = Sqn::new(1234).unwrap();
        let trials = 2000u32;
        let mut total = 0u64;
        for _ in 0..trials {
            let rand: [u8; 16] = rng.gen();
            let base = m.f1(&rand, sqn, NORMAL_AMF);
            let bit = rng.gen_range(0..128usize);
            let mut flipped = rand;
            flipped[bit / 8] ^= 1 << (bit % 8);
            total += u64::from(hamming64(base, m.f1(&flipped, sqn, NORMAL_AMF)));
        }
        let mean = total as f64 / f64::from(trials);
        assert!((24.0..=40.0).contains(&mean), "avalanche mean {mean}");
    }

    #[test]
    fn smac_changes_with_sqn() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let k = SubscriberKey(rng.gen());
            let m = Milenage::new_with_op(&k, &[0x3A; 16]);
            let sqn = Sqn::new(rng.gen_range(0..Sqn::MAX)).unwrap();
            assert_ne!(m.smac(sqn), m.smac(sqn.next().unwrap()));
        }
    }

    #[test]
    fn smac_never_collides_with_normal_f1_domain() {
        // Same rand/sqn, normal AMF vs the SMAC domain: outputs must
        // differ over random keys.
        let mut rng = ChaCha12Rng::seed_from_u64(8);
        for _ in 0..10_000 {
            let k = SubscriberKey(rng.gen());
            let m = Milenage::new_with_op(&k, &[0x3A; 16]);
            let sqn = Sqn::new(rng.gen_range(0..=Sqn::MAX)).unwrap();
            assert_ne!(m.f1(&[0u8; 16], sqn, NORMAL_AMF), m.smac(sqn));
        }
    }

    #[test]
    fn ek_xor_conceal_is_involutive() {
        let m = test_context();
        let ek = m.ek(Sqn::new(99).unwrap());
        let block = [0xC3u8, 0x01, 0x7F, 0x80, 0x55, 0xAA];
        let mut concealed = block;
        for i in 0..6 {
            concealed[i] ^= ek[i];
        }
        let mut revealed = concealed;
        for i in 0..6 {
            revealed[i] ^= ek[i];
        }
        assert_eq!(revealed, block);
    }

    #[test]
    fn ek_collision_scan() {
        let m = test_context();
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        for _ in 0..10_000 {
            let a = Sqn::new(rng.gen_range(0..Sqn::MAX)).unwrap();
            let b = Sqn::new(rng.gen_range(0..=Sqn::MAX)).unwrap();
            if a != b {
                assert_ne!(m.ek(a), m.ek(b));
            }
        }
    }
}
