//! Codons, amino acids, and the standard genetic code.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use super::SeqError;

/// The 20 proteinogenic amino acids in canonical (alphabetical) order.
pub const AMINO_ACIDS: [u8; 20] = *b"ACDEFGHIKLMNPQRSTVWY";

/// Number of sense (non-STOP) codons under the standard genetic code.
pub const SENSE_CODON_COUNT: usize = 61;

// Amino acid per codon index, standard genetic code (NCBI table 1).
// Codon index packs bases A=0, C=1, G=2, T=3 as b1*16 + b2*4 + b3, so the
// numeric order of indices is the lexicographic order of codon strings.
const CODON_AA: [u8; 64] = *b"KNKNTTTTRSRSIIMIQHQHPPPPRRRRLLLLEDEDAAAAGGGGVVVV*Y*YSSSS*CWCLFLF";

const BASES: [u8; 4] = *b"ACGT";

const fn base_index(b: u8) -> Option<u8> {
    match b {
        b'A' | b'a' => Some(0),
        b'C' | b'c' => Some(1),
        b'G' | b'g' => Some(2),
        b'T' | b't' | b'U' | b'u' => Some(3),
        _ => None,
    }
}

// Sense index (0..61) per codon index, -1 for STOP codons.
const SENSE_INDEX: [i8; 64] = {
    let mut table = [0i8; 64];
    let mut next = 0i8;
    let mut i = 0;
    while i < 64 {
        if CODON_AA[i] == b'*' {
            table[i] = -1;
        } else {
            table[i] = next;
            next += 1;
        }
        i += 1;
    }
    table
};

/// A nucleotide triplet over the DNA alphabet, stored as a packed index.
///
/// `Ord` follows the lexicographic order of the codon string (A < C < G < T).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Codon(u8);

impl Codon {
    /// Build a codon from three nucleotide bytes. RNA `U`/`u` is normalized
    /// to `T`; any other non-ACGT byte is rejected.
    pub fn from_bytes(bytes: [u8; 3]) -> Result<Codon, SeqError> {
        let mut idx = 0u8;
        for b in bytes {
            match base_index(b) {
                Some(v) => idx = idx * 4 + v,
                None => return Err(SeqError::IllegalBase { base: b as char }),
            }
        }
        Ok(Codon(idx))
    }

    /// The packed index in `0..64`.
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// The codon at a packed index. Panics if `index >= 64`.
    pub fn from_index(index: usize) -> Codon {
        assert!(index < 64, "codon index out of range");
        Codon(index as u8)
    }

    /// Dense index in `0..61` over sense codons, `None` for STOP codons.
    pub fn sense_index(self) -> Option<usize> {
        let s = SENSE_INDEX[self.index()];
        (s >= 0).then_some(s as usize)
    }

    pub fn bases(self) -> [u8; 3] {
        [
            BASES[(self.0 >> 4) as usize],
            BASES[(self.0 >> 2) as usize & 3],
            BASES[self.0 as usize & 3],
        ]
    }
}

impl fmt::Display for Codon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = self.bases();
        write!(f, "{}{}{}", b[0] as char, b[1] as char, b[2] as char)
    }
}

impl fmt::Debug for Codon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Codon {
    type Err = SeqError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = s.as_bytes();
        if bytes.len() != 3 {
            return Err(SeqError::BadCodonLength { text: s.to_string() });
        }
        Codon::from_bytes([bytes[0], bytes[1], bytes[2]])
    }
}

/// One of the 20 amino acids, stored as its single-letter code.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AminoAcid(u8);

impl AminoAcid {
    pub fn from_letter(letter: char) -> Result<AminoAcid, SeqError> {
        let upper = letter.to_ascii_uppercase();
        if AMINO_ACIDS.contains(&(upper as u8)) {
            Ok(AminoAcid(upper as u8))
        } else {
            Err(SeqError::IllegalAminoAcid { letter })
        }
    }

    pub fn letter(self) -> char {
        self.0 as char
    }

    /// Canonical index in `0..20`.
    pub fn index(self) -> usize {
        AMINO_ACIDS.iter().position(|&a| a == self.0).unwrap()
    }

    pub fn from_index(index: usize) -> AminoAcid {
        AminoAcid(AMINO_ACIDS[index])
    }

    /// All 20 amino acids in canonical order.
    pub fn all() -> impl Iterator<Item = AminoAcid> {
        AMINO_ACIDS.iter().map(|&a| AminoAcid(a))
    }
}

impl fmt::Display for AminoAcid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl fmt::Debug for AminoAcid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The standard genetic code (NCBI table 1): 61 sense codons, 3 STOP codons
/// (TAA, TAG, TGA), and the synonymous-codon grouping per amino acid.
pub struct GeneticCode {
    aa_by_codon: [Option<AminoAcid>; 64],
    codons_by_aa: [Vec<Codon>; 20],
    sense_codons: Vec<Codon>,
}

impl GeneticCode {
    /// The built-in standard code.
    pub fn standard() -> &'static GeneticCode {
        static CODE: OnceLock<GeneticCode> = OnceLock::new();
        CODE.get_or_init(|| {
            let mut aa_by_codon = [None; 64];
            let mut codons_by_aa: [Vec<Codon>; 20] = Default::default();
            let mut sense_codons = Vec::with_capacity(SENSE_CODON_COUNT);
            for idx in 0..64 {
                let letter = CODON_AA[idx];
                if letter == b'*' {
                    continue;
                }
                let aa = AminoAcid(letter);
                let codon = Codon(idx as u8);
                aa_by_codon[idx] = Some(aa);
                codons_by_aa[aa.index()].push(codon);
                sense_codons.push(codon);
            }
            GeneticCode { aa_by_codon, codons_by_aa, sense_codons }
        })
    }

    /// Amino acid encoded by `codon`, or `None` for a STOP codon.
    pub fn amino_acid(&self, codon: Codon) -> Option<AminoAcid> {
        self.aa_by_codon[codon.index()]
    }

    pub fn is_stop(&self, codon: Codon) -> bool {
        self.aa_by_codon[codon.index()].is_none()
    }

    /// Synonymous codons of `aa`, in lexicographic order (1 to 6 entries).
    pub fn synonymous_codons(&self, aa: AminoAcid) -> &[Codon] {
        &self.codons_by_aa[aa.index()]
    }

    /// All 61 sense codons in lexicographic order.
    pub fn sense_codons(&self) -> &[Codon] {
        &self.sense_codons
    }
}
