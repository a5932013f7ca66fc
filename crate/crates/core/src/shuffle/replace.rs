use crate::error::Error;

/// A prefix replacement `from ↦ to`: a word starting with `from` has that
/// prefix swapped for `to`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Replacement<T> {
    pub from: Vec<T>,
    pub to: Vec<T>,
}

impl<T> Replacement<T> {
    pub fn new(from: Vec<T>, to: Vec<T>) -> Self {
        Replacement { from, to }
    }
}

/// Applies a list of prefix replacements written in composition order, so
/// the rightmost entry acts first.
///
/// ```
/// use vabelian::shuffle::{apply_replacements, Replacement};
///
/// let r = |a: &str, b: &str| Replacement::new(a.chars().collect(), b.chars().collect());
/// let list = [r("c", "dc"), r("ba", "cb"), r("", "b")];
/// let out: String = apply_replacements(&list, &"az".chars().collect::<Vec<_>>()).unwrap().into_iter().collect();
/// assert_eq!(out, "dcbz");
/// ```
///
/// A failure reports the one-based position of the offending entry in the
/// list as written.
pub fn apply_replacements<T: Clone + PartialEq>(list: &[Replacement<T>], word: &[T]) -> Result<Vec<T>, Error> {
    let mut cur = word.to_vec();
    for (i, r) in list.iter().enumerate().rev() {
        if !cur.starts_with(&r.from) {
            return Err(Error::PrefixMismatch { step: i + 1 });
        }
        let mut next = r.to.clone();
        next.extend_from_slice(&cur[r.from.len()..]);
        cur = next;
    }
    Ok(cur)
}

/// The list undoing `list`: reversed, with each pair swapped.
pub fn invert_replacements<T: Clone>(list: &[Replacement<T>]) -> Vec<Replacement<T>> {
    list.iter().rev().map(|r| Replacement { from: r.to.clone(), to: r.from.clone() }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: &str, b: &str) -> Replacement<char> {
        Replacement::new(a.chars().collect(), b.chars().collect())
    }

    fn apply(list: &[Replacement<char>], w: &str) -> Result<String, Error> {
        apply_replacements(list, &w.chars().collect::<Vec<_>>()).map(|v| v.into_iter().collect())
    }

    #[test]
    fn worked_example() {
        let list = [r("c", "dc"), r("ba", "cb"), r("", "b")];
        assert_eq!(apply(&list, "az").unwrap(), "dcbz");
        let inv = invert_replacements(&list);
        assert_eq!(inv, vec![r("b", ""), r("cb", "ba"), r("dc", "c")]);
        assert_eq!(apply(&inv, "dcbz").unwrap(), "az");
    }

    #[test]
    fn empty_list_is_identity() {
        assert_eq!(apply(&[], "abc").unwrap(), "abc");
    }

    #[test]
    fn mismatch_reports_position() {
        let list = [r("c", "dc"), r("xa", "cb"), r("", "b")];
        assert!(matches!(apply(&list, "az"), Err(Error::PrefixMismatch { step: 2 })));
    }
}
