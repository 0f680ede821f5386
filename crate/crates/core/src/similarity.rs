//! Ratcliff/Obershelp gestalt pattern matching.
//!
//! The longest common contiguous block is located, then both flanks are
//! matched recursively. Among equally long blocks the one with the smallest
//! start in the first sequence wins, then the smallest start in the second.
//! That rule alone is direction dependent (`ab`/`bacb` match 2 characters,
//! `bacb`/`ab` only 1), so [`similarity`] always matches the
//! lexicographically smaller input against the larger one.

/// Inputs up to this length use the bit-parallel matcher.
const WORD: usize = 64;

/// Total length of the matched blocks of `a` against `b`, in this direction.
pub fn matching_characters<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    if a.len() <= WORD && b.len() <= WORD {
        match_words(a, b)
    } else {
        match_iterative(a, b)
    }
}

// masks[i] has bit j set when a[i] == b[j]
fn match_words<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let mut masks = [0u64; WORD];
    for (j, y) in b.iter().enumerate() {
        let bit = 1u64 << j;
        for (mask, x) in masks.iter_mut().zip(a) {
            *mask |= if x == y { bit } else { 0 };
        }
    }
    let mut runs = [0u64; WORD];
    match_masks(&masks[..a.len()], (0, a.len()), (0, b.len()), &mut runs)
}

/// [`match_words`] for ASCII bytes, building the masks from a table of
/// byte positions instead of comparing every pair.
fn match_ascii_words(a: &[u8], b: &[u8]) -> usize {
    debug_assert!(a.is_ascii() && b.is_ascii() && a.len() <= WORD && b.len() <= WORD);
    let mut positions = [0u64; 128];
    for (j, &y) in b.iter().enumerate() {
        positions[usize::from(y & 0x7f)] |= 1 << j;
    }
    let mut masks = [0u64; WORD];
    for (mask, &x) in masks.iter_mut().zip(a) {
        *mask = positions[usize::from(x & 0x7f)];
    }
    let mut runs = [0u64; WORD];
    match_masks(&masks[..a.len()], (0, a.len()), (0, b.len()), &mut runs)
}

// Recursion depth is bounded by the input length, at most `WORD`.
fn match_masks(
    masks: &[u64],
    (a_lo, a_hi): (usize, usize),
    (b_lo, b_hi): (usize, usize),
    runs: &mut [u64; WORD],
) -> usize {
    if a_lo == a_hi || b_lo == b_hi {
        return 0;
    }
    let (i, j, len) = longest_block_masks(masks, (a_lo, a_hi), (b_lo, b_hi), runs);
    if len == 0 {
        return 0;
    }
    len + match_masks(masks, (a_lo, i), (b_lo, j), runs) + match_masks(masks, (i + len, a_hi), (j + len, b_hi), runs)
}

/// Bit-parallel form of [`longest_block`] on `a[a_lo..a_hi]` and
/// `b[b_lo..b_hi]`, returning absolute positions.
fn longest_block_masks(
    masks: &[u64],
    (a_lo, a_hi): (usize, usize),
    (b_lo, b_hi): (usize, usize),
    runs: &mut [u64; WORD],
) -> (usize, usize, usize) {
    let below = |n: usize| if n == WORD { u64::MAX } else { (1u64 << n) - 1 };
    let range = below(b_hi) & !below(b_lo);
    let longest_possible = (a_hi - a_lo).min(b_hi - b_lo);
    // runs[k] marks the ends j of common suffixes of length > k in the
    // current row and each level is a subset of the one below; only levels
    // below `depth` are meaningful, so the scratch is never cleared
    let mut depth = 0;
    let mut best = (0, 0, 0);
    for i in a_lo..a_hi {
        let mask = masks[i] & range;
        for k in (1..=depth.min(WORD - 1)).rev() {
            runs[k] = (runs[k - 1] << 1) & mask;
        }
        runs[0] = mask;
        depth = (depth + 1).min(WORD);
        while depth > 0 && runs[depth - 1] == 0 {
            depth -= 1;
        }
        // strictly longer to replace an earlier row; the lowest end bit is
        // the smallest start in b
        if depth > best.2 {
            let end = runs[depth - 1].trailing_zeros() as usize;
            best = (i + 1 - depth, end + 1 - depth, depth);
            if depth == longest_possible {
                break;
            }
        }
    }
    best
}

// Long inputs use an explicit stack so that deep recursion cannot overflow.
fn match_iterative<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let mut previous = vec![0u32; b.len() + 1];
    let mut current = vec![0u32; b.len() + 1];
    let mut total = 0;
    let mut pending = vec![(0, a.len(), 0, b.len())];
    while let Some((a_lo, a_hi, b_lo, b_hi)) = pending.pop() {
        if a_lo == a_hi || b_lo == b_hi {
            continue;
        }
        let (i, j, len) = longest_block(&a[a_lo..a_hi], &b[b_lo..b_hi], &mut previous, &mut current);
        if len == 0 {
            continue;
        }
        let (i, j) = (a_lo + i, b_lo + j);
        total += len;
        pending.push((a_lo, i, b_lo, j));
        pending.push((i + len, a_hi, j + len, b_hi));
    }
    total
}

/// Longest common block of `a` and `b` as `(start_a, start_b, len)`.
/// Both scratch rows need room for `b.len() + 1` entries.
fn longest_block<T: PartialEq>(
    a: &[T],
    b: &[T],
    previous: &mut [u32],
    current: &mut [u32],
) -> (usize, usize, usize) {
    // row[j + 1] holds the length of the common suffix ending at a[i], b[j]
    let mut previous = &mut previous[..=b.len()];
    let mut current = &mut current[..=b.len()];
    previous.fill(0);
    current[0] = 0;
    let longest_possible = a.len().min(b.len()) as u32;
    // ends ascend in a, then in b, so a strictly longer block is needed to
    // replace an earlier one and ties keep the smallest starts
    let (mut best_len, mut best_end) = (0u32, 0usize);
    for (i, x) in a.iter().enumerate() {
        let row_start = i * b.len();
        for (j, y) in b.iter().enumerate() {
            // branch free: equality and improvement are close to random
            let len = (previous[j] + 1) * u32::from(x == y);
            current[j + 1] = len;
            let better = len > best_len;
            best_len = if better { len } else { best_len };
            best_end = if better { row_start + j } else { best_end };
        }
        // later rows can only tie, and ties keep the earlier row
        if best_len == longest_possible {
            break;
        }
        std::mem::swap(&mut previous, &mut current);
    }
    if best_len == 0 {
        return (0, 0, 0);
    }
    let len = best_len as usize;
    let (i, j) = (best_end / b.len(), best_end % b.len());
    (i + 1 - len, j + 1 - len, len)
}

/// Gestalt ratio `2K / (|a| + |b|)` over arbitrary sequences.
pub fn similarity_seq<T: Ord>(a: &[T], b: &[T]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    let (first, second) = if a <= b { (a, b) } else { (b, a) };
    let matched = matching_characters(first, second);
    2.0 * matched as f64 / (a.len() + b.len()) as f64
}

/// Gestalt ratio of two texts compared by Unicode scalar value, without
/// any normalization. Symmetric, in `[0, 1]`, and 1 exactly when `a == b`.
pub fn similarity(a: &str, b: &str) -> f64 {
    if a.is_ascii() && b.is_ascii() {
        let (a, b) = (a.as_bytes(), b.as_bytes());
        if a.len() <= WORD && b.len() <= WORD {
            if a.is_empty() && b.is_empty() {
                return 1.0;
            }
            let (first, second) = if a <= b { (a, b) } else { (b, a) };
            2.0 * match_ascii_words(first, second) as f64 / (a.len() + b.len()) as f64
        } else {
            similarity_seq(a, b)
        }
    } else {
        let a: Vec<char> = a.chars().collect();
        let b: Vec<char> = b.chars().collect();
        similarity_seq(&a, &b)
    }
}
