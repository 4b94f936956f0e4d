//! Signed unshuffles.

/// A permutation in one-line notation (0-based images) with its sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedPermutation {
    pub images: Vec<usize>,
    pub sign: i32,
}

pub fn sign_of(images: &[usize]) -> i32 {
    let mut inversions = 0usize;
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            if images[i] > images[j] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// All `(i, j)`-unshuffles: permutations `tau` of `i + j` elements with
/// `tau(1) < ... < tau(i)` and `tau(i+1) < ... < tau(i+j)`, ordered by the
/// lexicographic order of their first block.
pub fn unshuffles(i: usize, j: usize) -> Vec<SignedPermutation> {
    let n = i + j;
    let mut out = Vec::new();
    let mut first: Vec<usize> = (0..i).collect();
    loop {
        let mut images = first.clone();
        images.extend((0..n).filter(|k| !first.contains(k)));
        let sign = sign_of(&images);
        out.push(SignedPermutation { images, sign });

        // next i-subset of 0..n in lex order
        let mut k = i;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if first[k] < n - i + k {
                first[k] += 1;
                for l in k + 1..i {
                    first[l] = first[l - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Strictly increasing `k`-subsets of `0..n`, lexicographic.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n {
        return vec![];
    }
    unshuffles(k, n - k)
        .into_iter()
        .map(|p| p.images[..k].to_vec())
        .collect()
}

/// All `len`-tuples over `0..base`, lexicographic (first entry slowest).
pub fn tuples(base: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = if base == 0 && len > 0 { 0 } else { base.pow(len as u32) };
    (0..total).map(move |mut k| {
        let mut t = vec![0; len];
        for slot in t.iter_mut().rev() {
            *slot = k % base;
            k /= base;
        }
        t
    })
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, t| acc * (n - t) / (t + 1))
}
