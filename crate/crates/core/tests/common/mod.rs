/// Independent strong-blocking oracle over a prime field: every nonzero
/// dual vector, points in the hyperplane row-reduced mod p.
pub fn prime_field_sbs_oracle(p: u32, k: usize, points: &[Vec<u32>]) -> (bool, usize) {
    let total = (p as usize).pow(k as u32);
    let mut hyperplanes = 0;
    for code in 1..total {
        let mut u = vec![0u32; k];
        let mut c = code;
        for x in u.iter_mut() {
            *x = (c % p as usize) as u32;
            c /= p as usize;
        }
        // one representative per projective class: leading nonzero is 1
        if u.iter().find(|&&x| x != 0) != Some(&1) {
            continue;
        }
        hyperplanes += 1;
        let mut rows: Vec<Vec<u32>> = points
            .iter()
            .filter(|pt| pt.iter().zip(&u).map(|(a, b)| a * b).sum::<u32>() % p == 0)
            .cloned()
            .collect();
        if rank_mod_p(&mut rows, p) != k - 1 {
            return (false, hyperplanes);
        }
    }
    (true, hyperplanes)
}

pub fn rank_mod_p(rows: &mut [Vec<u32>], p: u32) -> usize {
    let inv = |a: u32| (1..p).find(|&b| a * b % p == 1).unwrap();
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let s = inv(rows[rank][col]);
        for x in rows[rank].iter_mut() {
            *x = *x * s % p;
        }
        for i in 0..rows.len() {
            if i != rank && rows[i][col] != 0 {
                let f = rows[i][col];
                for j in 0..cols {
                    rows[i][j] = (rows[i][j] + (p - f) * rows[rank][j]) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}
