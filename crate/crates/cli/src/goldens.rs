//! Reference data transcribed by hand: the Θ⁺ sets and the Δ column of the table.
//!
//! Weights are written in doubled coordinates, in the coordinate order of the
//! catalog. Families are expanded here rather than listed so that each one
//! reads like its printed form.

/// All ±1 sign patterns of length n, first entry varying slowest.
fn signs(n: usize) -> Vec<Vec<i32>> {
    (0..1u32 << n)
        .map(|m| (0..n).map(|i| if m >> (n - 1 - i) & 1 == 1 { -1 } else { 1 }).collect())
        .collect()
}

fn unit(n: usize, i: usize, v: i32) -> Vec<i32> {
    let mut u = vec![0; n];
    u[i] = v;
    u
}

fn sum(parts: &[&[i32]]) -> Vec<i32> {
    let n = parts[0].len();
    (0..n).map(|i| parts.iter().map(|p| p[i]).sum()).collect()
}

fn join(a: &[i32], b: &[i32]) -> Vec<i32> {
    a.iter().chain(b).copied().collect()
}

/// e_{i} + e_{j} + ... in doubled coordinates (1-based indices).
fn e(n: usize, idx: &[usize]) -> Vec<i32> {
    let mut v = vec![0; n];
    for &i in idx {
        v[i - 1] += 2;
    }
    v
}

fn neg(v: &[i32]) -> Vec<i32> {
    v.iter().map(|x| -x).collect()
}

/// The Θ⁺ set of a model, if one is recorded.
pub fn theta_plus(model: &str) -> Option<Vec<Vec<i32>>> {
    let out = match model {
        "trilinear" => vec![
            vec![2, 0, 2, 0, 2, 0],
            vec![2, 0, 2, 0, 0, 2],
            vec![2, 0, 0, 2, 2, 0],
            vec![0, 2, 2, 0, 2, 0],
        ],
        "GSp6xGSp4" => {
            let mut v = Vec::new();
            for s in signs(3) {
                v.push(vec![1, 1, s[0], s[1], s[2]]);
            }
            for s in [1, -1] {
                v.push(vec![1, -1, 1, 1, s]);
            }
            v.push(vec![1, -1, 1, -1, 1]);
            for t in [1, -1] {
                for s in [1, -1] {
                    v.push(vec![t, -t, -t, 1, s]);
                }
            }
            v.push(vec![-1, 1, -1, 1, 1]);
            v
        }
        "GL4xGL2" => {
            let mut v = Vec::new();
            for i in 2..=3 {
                for j in 1..=2 {
                    v.push(e(6, &[1, i, 4 + j]));
                }
            }
            v.push(e(6, &[1, 4, 5]));
            v.push(e(6, &[2, 3, 5]));
            v.push(e(6, &[1]));
            v.push(e(6, &[2]));
            v.push(neg(&e(6, &[3])));
            v.push(neg(&e(6, &[4])));
            v
        }
        "GL6" => {
            let mut v = Vec::new();
            for i in 3..=6 {
                v.push(e(6, &[1, 2, i]));
            }
            for j in 4..=6 {
                v.push(e(6, &[1, 3, j]));
            }
            v.push(e(6, &[1, 4, 5]));
            v.push(e(6, &[2, 3, 4]));
            v.push(e(6, &[2, 3, 5]));
            v
        }
        // The same set for GU6 in (e1, e2, e3) and GU4×GU2 in (e1, e2, e1').
        "GU6" | "GU4xGU2" => {
            let mut v: Vec<Vec<i32>> = (0..3).map(|i| unit(3, i, 2)).collect();
            for s in signs(2) {
                v.push(vec![1, s[0], s[1]]);
            }
            v
        }
        "GSp10" => {
            let mut v = Vec::new();
            for s in signs(3) {
                v.push(join(&[1, 1], &s));
            }
            for s in signs(2) {
                v.push(join(&[1, -1, 1], &s));
            }
            v.push(vec![1, -1, -1, 1, 1]);
            for s in [1, -1] {
                v.push(vec![-1, 1, 1, 1, s]);
            }
            v.push(vec![-1, 1, 1, -1, 1]);
            v
        }
        "GSp6xGL2" => {
            let mut v = Vec::new();
            for i in 0..2 {
                let ei = unit(2, i, 2);
                for s in [1, -1] {
                    v.push(join(&[1, 1, s], &ei));
                }
                v.push(join(&[1, -1, 1], &ei));
            }
            for t in [1, -1] {
                v.push(join(&[t, -t, -t], &[2, 0]));
            }
            v
        }
        "GSO12" => {
            let mut v = Vec::new();
            for l in 0..6 {
                let mut w = vec![1; 6];
                w[l] = -1;
                v.push(w);
            }
            let triples = [
                [1, 2, 3],
                [1, 2, 4],
                [1, 2, 5],
                [1, 2, 6],
                [1, 3, 4],
                [1, 3, 5],
                [1, 3, 6],
                [1, 4, 5],
                [2, 3, 4],
                [2, 3, 5],
            ];
            for t in triples {
                let mut w = vec![-1; 6];
                for i in t {
                    w[i - 1] = 1;
                }
                v.push(w);
            }
            v
        }
        "GSO8xGL2" => {
            let mut v = Vec::new();
            for i in 0..2 {
                let ei = unit(2, i, 2);
                for s in [1, -1] {
                    v.push(join(&[1, 1, s, s], &ei));
                }
                v.push(join(&[1, -1, 1, -1], &ei));
            }
            for t in [1, -1] {
                v.push(join(&[t, -t, -t, t], &[2, 0]));
            }
            v
        }
        "E7" => {
            let mut v = Vec::new();
            let half = |f: &dyn Fn(usize) -> i32| -> Vec<i32> { join(&(0..6).map(f).collect::<Vec<_>>(), &[0, 0]) };
            for (i, j) in [(2, 3), (2, 4), (3, 4), (2, 5), (3, 5), (4, 5), (2, 6), (3, 6)] {
                v.push(half(&|k| if k + 1 == i || k + 1 == j { -1 } else { 1 }));
            }
            for (i, j) in [(5, 6), (4, 6)] {
                v.push(half(&|k| if k + 1 == i || k + 1 == j { 1 } else { -1 }));
            }
            v.push(half(&|_| 1));
            for m in 2..=6 {
                v.push(half(&|k| if k == 0 || k + 1 == m { -1 } else { 1 }));
            }
            let tail = sum(&[&unit(8, 7, 1), &unit(8, 6, -1)]);
            for m in 0..6 {
                for s in [2, -2] {
                    v.push(sum(&[&unit(8, m, s), &tail]));
                }
            }
            v
        }
        _ => return None,
    };
    Some(out)
}

/// Number of elements stated for each Θ⁺ set, counted as printed.
pub fn theta_plus_stated_count(model: &str) -> Option<usize> {
    Some(match model {
        "trilinear" => 4,
        "GSp6xGSp4" | "GSp10" | "GSO12" => 16,
        "GL4xGL2" | "GL6" => 10,
        "GU6" | "GU4xGU2" | "GSp6xGL2" | "GSO8xGL2" => 8,
        "E7" => 28,
        _ => return None,
    })
}

/// The Δ column of the table as (zeta degrees, η-twisted degrees), by row.
pub fn table_delta(row: u8) -> Option<(Vec<u32>, Vec<u32>)> {
    Some(match row {
        1 => (vec![1, 3, 4], vec![]),
        2 => (vec![1, 1, 4], vec![1, 3]),
        3 => (vec![1, 1, 4, 6], vec![]),
        4 => (vec![1, 3, 4, 5, 6], vec![]),
        5 => (vec![1, 4, 6], vec![1, 3, 5]),
        6 => (vec![1, 4, 6, 8, 10], vec![]),
        7 => (vec![1, 2, 4, 6], vec![]),
        8 => (vec![1, 1, 2, 4, 4, 6], vec![]),
        9 => (vec![1, 4, 6, 6, 8, 10], vec![]),
        10 => (vec![6, 8, 10, 12, 14, 18], vec![]),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_sizes() {
        for m in ["trilinear", "GSp6xGSp4", "GL4xGL2", "GL6", "GSp10", "GSp6xGL2", "GSO12", "GSO8xGL2", "E7"] {
            let v = theta_plus(m).unwrap();
            assert_eq!(v.len(), theta_plus_stated_count(m).unwrap(), "{m}");
            let mut d = v.clone();
            d.sort();
            d.dedup();
            assert_eq!(d.len(), v.len(), "{m} has repeated entries");
        }
        // The unitary sets list e_i once although ±e_i spans a degree-2 weight space.
        assert_eq!(theta_plus("GU6").unwrap().len(), 7);
    }
}
