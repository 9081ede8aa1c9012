//! Truncated unary binarization: index `n` becomes `n` ones followed by a
//! zero, except the largest index `N - 1`, which is `N - 1` ones with no
//! terminator. For `N = 4`: `0, 10, 110, 111`.

use crate::error::{Error, Result};

/// Bins of one codeword, first bin first. Bin `k` is coded with context `k`.
#[derive(Debug, Clone)]
pub struct Bins {
    ones: usize,
    terminated: bool,
    emitted: usize,
}

impl Iterator for Bins {
    type Item = bool;

    fn next(&mut self) -> Option<bool> {
        let len = self.ones + self.terminated as usize;
        if self.emitted >= len {
            return None;
        }
        let bit = self.emitted < self.ones;
        self.emitted += 1;
        Some(bit)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.ones + self.terminated as usize - self.emitted;
        (left, Some(left))
    }
}

impl ExactSizeIterator for Bins {}

pub fn binarize(index: usize, n_levels: usize) -> Result<Bins> {
    if index >= n_levels {
        return Err(Error::IndexOutOfRange { index, n_levels });
    }
    Ok(Bins {
        ones: index,
        terminated: index + 1 < n_levels,
        emitted: 0,
    })
}

/// Length of the codeword for `index`: `min(index + 1, N - 1)`.
pub fn codeword_len(index: usize, n_levels: usize) -> usize {
    (index + 1).min(n_levels - 1)
}

/// Reads one codeword. `read_bin(k)` supplies bin `k` of the codeword; it is
/// called exactly once per bin, in order, and never past the codeword end.
pub fn debinarize<F>(n_levels: usize, mut read_bin: F) -> Result<usize>
where
    F: FnMut(usize) -> Result<bool>,
{
    let mut index = 0;
    while index + 1 < n_levels {
        if !read_bin(index)? {
            break;
        }
        index += 1;
    }
    Ok(index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::String;
    use alloc::vec::Vec;

    fn code(index: usize, n: usize) -> String {
        binarize(index, n)
            .unwrap()
            .map(|b| if b { '1' } else { '0' })
            .collect()
    }

    fn read(bits: &str, n: usize) -> (usize, usize) {
        let v: Vec<bool> = bits.chars().map(|c| c == '1').collect();
        let mut used = 0;
        let index = debinarize(n, |k| {
            assert_eq!(k, used);
            used += 1;
            Ok(v[k])
        })
        .unwrap();
        (index, used)
    }

    #[test]
    fn four_level_table() {
        let codes: Vec<String> = (0..4).map(|i| code(i, 4)).collect();
        assert_eq!(codes, ["0", "10", "110", "111"]);
        assert_eq!((code(0, 2), code(1, 2)), ("0".into(), "1".into()));
        assert!(binarize(4, 4).is_err());
    }

    #[test]
    fn reading_consumes_one_codeword() {
        assert_eq!(read("1101", 4), (2, 3));
        assert_eq!(read("111", 4), (3, 3));
        assert_eq!(read("0111", 4), (0, 1));
        assert_eq!(read("0", 255), (0, 1));
    }

    #[test]
    fn prefix_free_and_lengths_for_all_level_counts() {
        for n in 2..=255usize {
            let codes: Vec<String> = (0..n).map(|i| code(i, n)).collect();
            for (i, c) in codes.iter().enumerate() {
                assert_eq!(c.len(), codeword_len(i, n));
                assert_eq!(read(c, n), (i, c.len()));
            }
            for (i, a) in codes.iter().enumerate() {
                for b in &codes[i + 1..] {
                    assert!(!b.starts_with(a.as_str()) && !a.starts_with(b.as_str()));
                }
            }
        }
    }
}
