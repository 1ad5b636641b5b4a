use std::fmt;
use std::str::FromStr;

/// A permutation of the vertex labels `{0, 1, 2, 3}` of a tetrahedron.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm4([u8; 4]);

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4([0, 1, 2, 3]);

    /// Builds the permutation sending `i` to `images[i]`.
    pub fn new(images: [u8; 4]) -> Option<Self> {
        let mut seen = [false; 4];
        for &x in &images {
            if x > 3 || seen[x as usize] {
                return None;
            }
            seen[x as usize] = true;
        }
        Some(Perm4(images))
    }

    pub fn all() -> impl Iterator<Item = Perm4> {
        (0..24u8).map(|mut code| {
            let mut pool = vec![0u8, 1, 2, 3];
            let mut images = [0u8; 4];
            for (i, slot) in images.iter_mut().enumerate() {
                let radix = (4 - i) as u8;
                let idx = (code % radix) as usize;
                code /= radix;
                *slot = pool.remove(idx);
            }
            Perm4(images)
        })
    }

    #[inline]
    pub fn apply(self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn images(self) -> [u8; 4] {
        self.0
    }

    pub fn inverse(self) -> Perm4 {
        let mut inv = [0u8; 4];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Perm4(inv)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(self, other: Perm4) -> Perm4 {
        let mut out = [0u8; 4];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.0[other.0[i] as usize];
        }
        Perm4(out)
    }

    /// +1 for even permutations, -1 for odd ones.
    pub fn sign(self) -> i8 {
        sign_of(self.0)
    }

    pub fn is_odd(self) -> bool {
        self.sign() < 0
    }
}

/// Sign of an arbitrary arrangement of four distinct labels.
pub(crate) fn sign_of(labels: [u8; 4]) -> i8 {
    let mut sign = 1;
    for i in 0..4 {
        for j in i + 1..4 {
            if labels[i] > labels[j] {
                sign = -sign;
            }
        }
    }
    sign
}

impl fmt::Display for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in self.0 {
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm4({self})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsePermError;

impl fmt::Display for ParsePermError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("expected four distinct digits from 0-3")
    }
}

impl std::error::Error for ParsePermError {}

impl FromStr for Perm4 {
    type Err = ParsePermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = s.as_bytes();
        if bytes.len() != 4 {
            return Err(ParsePermError);
        }
        let mut images = [0u8; 4];
        for (slot, &b) in images.iter_mut().zip(bytes) {
            if !(b'0'..=b'3').contains(&b) {
                return Err(ParsePermError);
            }
            *slot = b - b'0';
        }
        Perm4::new(images).ok_or(ParsePermError)
    }
}
