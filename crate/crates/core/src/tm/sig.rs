//! Bit-packed boundary signatures.
//!
//! Two bits per boundary slot (empty / loop-lower / loop-upper / free end),
//! newest slot layouts spliced in place, plus three flag bits recording
//! which walk ends have already touched down. Loop states form a balanced
//! non-crossing matching; at most two free ends exist.

use crate::lattice::MAX_SLOTS;

pub const EMPTY: u8 = 0;
pub const LOWER: u8 = 1;
pub const UPPER: u8 = 2;
pub const FREE: u8 = 3;

const FLAG_SHIFT: u32 = 2 * MAX_SLOTS as u32; // 56
const ORIGIN_BIT: u64 = 1 << FLAG_SHIFT;
const OTHER_SHIFT: u32 = FLAG_SHIFT + 1;
const OTHER_MASK: u64 = 0b11 << OTHER_SHIFT;
const SLOTS_MASK: u64 = ORIGIN_BIT - 1;

/// Classification of the non-origin walk end.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum EndClass {
    Alpha = 1,
    Beta = 2,
    Epsilon = 3,
}

impl EndClass {
    fn from_bits(b: u64) -> Option<EndClass> {
        match b {
            0 => None,
            1 => Some(EndClass::Alpha),
            2 => Some(EndClass::Beta),
            _ => Some(EndClass::Epsilon),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sig(pub u64);

impl Sig {
    pub const EMPTY_SIG: Sig = Sig(0);

    #[inline]
    pub fn state(self, slot: usize) -> u8 {
        ((self.0 >> (2 * slot)) & 0b11) as u8
    }

    #[inline]
    pub fn with_state(self, slot: usize, s: u8) -> Sig {
        let sh = 2 * slot;
        Sig((self.0 & !(0b11u64 << sh)) | ((s as u64) << sh))
    }

    #[inline]
    pub fn slots_bits(self) -> u64 {
        self.0 & SLOTS_MASK
    }

    #[inline]
    pub fn slots_empty(self) -> bool {
        self.slots_bits() == 0
    }

    #[inline]
    pub fn origin_used(self) -> bool {
        self.0 & ORIGIN_BIT != 0
    }

    #[inline]
    pub fn with_origin_used(self) -> Sig {
        Sig(self.0 | ORIGIN_BIT)
    }

    #[inline]
    pub fn other_end(self) -> Option<EndClass> {
        EndClass::from_bits((self.0 & OTHER_MASK) >> OTHER_SHIFT)
    }

    #[inline]
    pub fn with_other_end(self, class: EndClass) -> Sig {
        Sig((self.0 & !OTHER_MASK) | ((class as u64) << OTHER_SHIFT))
    }

    /// Remove `n_remove` slots at `at` and insert `new_states` there.
    pub fn splice(self, at: usize, n_remove: usize, new_states: &[u8]) -> Sig {
        let flags = self.0 & !SLOTS_MASK;
        let bits = self.0 & SLOTS_MASK;
        let low_mask = (1u64 << (2 * at)) - 1;
        let low = bits & low_mask;
        let high = (bits >> (2 * (at + n_remove))) << (2 * (at + new_states.len()));
        let mut inserted = 0u64;
        for (i, &s) in new_states.iter().enumerate() {
            inserted |= (s as u64) << (2 * (at + i));
        }
        Sig(flags | (low | inserted | (high & SLOTS_MASK)))
    }

    /// Matching partner of the loop end at `slot`, by parenthesis matching
    /// over the occupied loop states.
    pub fn partner(self, slot: usize, n_slots: usize) -> Option<usize> {
        match self.state(slot) {
            LOWER => {
                let mut depth = 1i32;
                for q in slot + 1..n_slots {
                    match self.state(q) {
                        LOWER => depth += 1,
                        UPPER => {
                            depth -= 1;
                            if depth == 0 {
                                return Some(q);
                            }
                        }
                        _ => {}
                    }
                }
                None
            }
            UPPER => {
                let mut depth = 1i32;
                for q in (0..slot).rev() {
                    match self.state(q) {
                        UPPER => depth += 1,
                        LOWER => {
                            depth -= 1;
                            if depth == 0 {
                                return Some(q);
                            }
                        }
                        _ => {}
                    }
                }
                None
            }
            _ => None,
        }
    }

    pub fn count_state(self, s: u8, n_slots: usize) -> usize {
        (0..n_slots).filter(|&i| self.state(i) == s).count()
    }

    /// Structural validity: balanced non-crossing loops, at most two free
    /// ends, and the free-end count equal to the number of finished ends.
    pub fn is_valid(self, n_slots: usize) -> bool {
        let mut depth = 0i32;
        let mut free = 0usize;
        for i in 0..n_slots {
            match self.state(i) {
                LOWER => depth += 1,
                UPPER => {
                    depth -= 1;
                    if depth < 0 {
                        return false;
                    }
                }
                FREE => free += 1,
                _ => {}
            }
        }
        // Slots past n_slots must be clear.
        if n_slots < MAX_SLOTS && (self.slots_bits() >> (2 * n_slots)) != 0 {
            return false;
        }
        let ends = self.origin_used() as usize + self.other_end().is_some() as usize;
        depth == 0 && free <= 2 && free == ends
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig_of(states: &[u8]) -> Sig {
        let mut s = Sig::EMPTY_SIG;
        for (i, &st) in states.iter().enumerate() {
            s = s.with_state(i, st);
        }
        s
    }

    #[test]
    fn splice_replaces_a_run() {
        let s = sig_of(&[LOWER, EMPTY, UPPER, FREE]);
        let t = s.splice(1, 2, &[FREE]);
        assert_eq!(t.state(0), LOWER);
        assert_eq!(t.state(1), FREE);
        assert_eq!(t.state(2), FREE);
        assert_eq!(t.state(3), EMPTY);
    }

    #[test]
    fn splice_pure_insert_and_remove() {
        let s = sig_of(&[LOWER, UPPER]);
        let t = s.splice(1, 0, &[LOWER, UPPER]);
        assert_eq!(
            (0..4).map(|i| t.state(i)).collect::<Vec<_>>(),
            vec![LOWER, LOWER, UPPER, UPPER]
        );
        let u = t.splice(0, 1, &[]);
        assert_eq!(u.state(0), LOWER);
        assert_eq!(u.state(2), UPPER);
    }

    #[test]
    fn partner_matches_nested_loops() {
        let s = sig_of(&[LOWER, LOWER, UPPER, UPPER]);
        assert_eq!(s.partner(0, 4), Some(3));
        assert_eq!(s.partner(1, 4), Some(2));
        assert_eq!(s.partner(2, 4), Some(1));
        assert_eq!(s.partner(3, 4), Some(0));
    }

    #[test]
    fn partner_skips_free_and_empty() {
        let s = sig_of(&[LOWER, FREE, EMPTY, UPPER]);
        assert_eq!(s.partner(0, 4), Some(3));
    }

    #[test]
    fn validity_checks() {
        assert!(sig_of(&[EMPTY, EMPTY]).is_valid(2));
        assert!(!sig_of(&[UPPER, LOWER]).is_valid(2));
        assert!(!sig_of(&[LOWER, EMPTY]).is_valid(2));
        // one free end requires one finished walk end
        let s = sig_of(&[FREE]).with_origin_used();
        assert!(s.is_valid(1));
        assert!(!sig_of(&[FREE]).is_valid(1));
        let two = sig_of(&[FREE, FREE]).with_origin_used().with_other_end(EndClass::Alpha);
        assert!(two.is_valid(2));
    }

    #[test]
    fn flags_are_independent_of_slots() {
        let s = sig_of(&[LOWER, UPPER]).with_origin_used().with_other_end(EndClass::Beta);
        assert!(s.origin_used());
        assert_eq!(s.other_end(), Some(EndClass::Beta));
        let t = s.splice(0, 2, &[FREE, FREE]);
        assert!(t.origin_used());
        assert_eq!(t.other_end(), Some(EndClass::Beta));
    }
}
