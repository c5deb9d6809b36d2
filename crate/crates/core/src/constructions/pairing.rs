fn triangle(j: usize) -> usize {
    j * (j + 1) / 2
}

/// Bijection `ℕ × ℕ → ℕ` enumerating pairs by the diagonal `n + m`, with `n`
/// rising along each diagonal. `pair(0, 0) = 0` and `pair(n, m) < pair(n, m + 1)`.
pub fn pair(n: usize, m: usize) -> usize {
    triangle(n + m) + n
}

/// Inverse of [`pair`].
pub fn unpair(s: usize) -> (usize, usize) {
    let mut d = 0;
    while triangle(d + 1) <= s {
        d += 1;
    }
    let n = s - triangle(d);
    (n, d - n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_stages() {
        let order: Vec<(usize, usize)> = (0..6).map(unpair).collect();
        assert_eq!(order, vec![(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0)]);
        assert_eq!(pair(0, 1), 1);
    }

    #[test]
    fn round_trip_and_monotone() {
        for s in 0..500 {
            let (n, m) = unpair(s);
            assert_eq!(pair(n, m), s);
            assert!(pair(n, m) < pair(n, m + 1));
        }
    }
}
