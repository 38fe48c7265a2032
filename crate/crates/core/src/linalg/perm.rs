/// Calls `f(perm, sign)` for every permutation of `0..n` (Heap's algorithm),
/// tracking the sign incrementally.
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize], f64)) {
    let mut p: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    f(&p, sign);
    let mut c = vec![0usize; n];
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            sign = -sign;
            f(&p, sign);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Sign of a permutation given as images of `0..n`.
pub fn permutation_sign(p: &[usize]) -> f64 {
    let mut seen = vec![false; p.len()];
    let mut sign = 1.0;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            j = p[j];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}
