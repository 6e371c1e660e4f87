//! Words over `0..q` and their lexicographic ranks.
//!
//! Rank order is lexicographic with coordinate 0 most significant, so
//! iterating ranks upward visits words in lexicographic order.

pub type Color = u8;

/// A full assignment of colors to the vertices of a graph.
pub type Coloring = Vec<Color>;

/// Advances `word` to its lexicographic successor. Returns false (leaving
/// the word all zeros) after the last word.
#[inline]
pub fn next_word(word: &mut [Color], q: usize) -> bool {
    for c in word.iter_mut().rev() {
        if (*c as usize) + 1 < q {
            *c += 1;
            return true;
        }
        *c = 0;
    }
    false
}

#[inline]
pub fn lex_rank(word: &[Color], q: usize) -> usize {
    word.iter().fold(0, |acc, &c| acc * q + c as usize)
}

pub fn lex_word(mut rank: usize, len: usize, q: usize) -> Coloring {
    let mut out = vec![0; len];
    for c in out.iter_mut().rev() {
        *c = (rank % q) as Color;
        rank /= q;
    }
    out
}

/// Iterator over all of `[q]^len` in lexicographic order.
pub fn all_words(len: usize, q: usize) -> impl Iterator<Item = Coloring> {
    let mut cur = if q == 0 && len > 0 { None } else { Some(vec![0; len]) };
    std::iter::from_fn(move || {
        let w = cur.take()?;
        let mut next = w.clone();
        if next_word(&mut next, q) {
            cur = Some(next);
        }
        Some(w)
    })
}

pub(crate) fn check_word(word: &[Color], q: usize) -> bool {
    word.iter().all(|&c| (c as usize) < q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_follow_lex_order() {
        let words: Vec<_> = all_words(3, 3).collect();
        assert_eq!(words.len(), 27);
        for (i, w) in words.iter().enumerate() {
            assert_eq!(lex_rank(w, 3), i);
            assert_eq!(&lex_word(i, 3, 3), w);
        }
        assert!(words.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn empty_word() {
        let words: Vec<_> = all_words(0, 4).collect();
        assert_eq!(words, vec![Vec::<Color>::new()]);
    }
}
