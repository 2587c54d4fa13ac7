//! Reference oracles written against the machine's definition, sharing no code
//! with the library: a string-level interpreter, brute-force minimum
//! description search, and BBP digit extraction for π.

#![allow(dead_code)]

pub const REG_CAP: u64 = 4096;
pub const OUTPUT_CAP: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleRun {
    Halted { output: String, steps: u64 },
    Invalid,
    /// Out of steps, over the output cap, or left the target prefix.
    NotHalted,
}

/// Interprets `code` (a string of '0'/'1') on input `n`.
///
/// With `target`, stops early once the output can no longer equal it.
pub fn oracle_run(code: &str, n: u64, budget: u64, target: Option<&str>) -> OracleRun {
    let bits = code.as_bytes();
    if bits.is_empty() {
        return OracleRun::Halted {
            output: String::new(),
            steps: 0,
        };
    }
    if bits[0] == b'1' {
        let payload = &code[1..];
        if payload.len() as u64 > budget || payload.len() > OUTPUT_CAP {
            return OracleRun::NotHalted;
        }
        return OracleRun::Halted {
            output: payload.to_string(),
            steps: payload.len() as u64,
        };
    }
    if !(bits.len() - 1).is_multiple_of(3) {
        return OracleRun::Invalid;
    }
    let ops: Vec<u8> = bits[1..]
        .chunks(3)
        .map(|c| (c[0] - b'0') * 4 + (c[1] - b'0') * 2 + (c[2] - b'0'))
        .collect();
    // Bracket matching by depth scanning.
    let mut partner = vec![usize::MAX; ops.len()];
    for i in 0..ops.len() {
        if ops[i] == 4 {
            let mut depth = 0i32;
            for j in i..ops.len() {
                match ops[j] {
                    4 => depth += 1,
                    5 => depth -= 1,
                    _ => {}
                }
                if depth == 0 {
                    partner[i] = j;
                    partner[j] = i;
                    break;
                }
            }
            if partner[i] == usize::MAX {
                return OracleRun::Invalid;
            }
        }
    }
    if ops.iter().zip(&partner).any(|(&op, &p)| op == 5 && p == usize::MAX) {
        return OracleRun::Invalid;
    }
    let (mut a, mut b) = (0u64, 0u64);
    let mut pc = 0usize;
    let mut steps = 0u64;
    let mut out = String::new();
    while pc < ops.len() {
        if steps == budget {
            return OracleRun::NotHalted;
        }
        steps += 1;
        match ops[pc] {
            0 | 1 => {
                if out.len() == OUTPUT_CAP {
                    return OracleRun::NotHalted;
                }
                out.push(if ops[pc] == 0 { '0' } else { '1' });
                if let Some(t) = target {
                    if !t.starts_with(out.as_str()) {
                        return OracleRun::NotHalted;
                    }
                }
                pc += 1;
            }
            2 => {
                a = if a < REG_CAP { a + 1 } else { REG_CAP };
                pc += 1;
            }
            3 => {
                a = if a > 0 { a - 1 } else { 0 };
                pc += 1;
            }
            4 => pc = if a == 0 { partner[pc] + 1 } else { pc + 1 },
            5 => pc = partner[pc],
            6 => {
                a = if n < REG_CAP { n } else { REG_CAP };
                pc += 1;
            }
            _ => {
                std::mem::swap(&mut a, &mut b);
                pc += 1;
            }
        }
    }
    OracleRun::Halted { output: out, steps }
}

pub fn all_strings(len: usize) -> impl Iterator<Item = String> {
    (0..1u64 << len).map(move |v| {
        if len == 0 {
            String::new()
        } else {
            format!("{v:0len$b}")
        }
    })
}

/// Shortest (then lexicographically first) program of length at most `max_len`
/// that halts with output `x` on input `l(x)` within `budget` steps.
pub fn brute_force_min(x: &str, max_len: usize, budget: u64) -> Option<String> {
    let n = x.len() as u64;
    (0..=max_len).find_map(|len| {
        all_strings(len).find(|code| {
            matches!(oracle_run(code, n, budget, Some(x)),
                OracleRun::Halted { ref output, .. } if output == x)
        })
    })
}

/// Every program of length at most `max_len` producing `x` within
/// `max_len + 1 - len` steps, i.e. what a stage schedule to `max_len` must find.
pub fn brute_force_descriptions(x: &str, max_len: usize) -> Vec<(String, u64)> {
    let n = x.len() as u64;
    let mut found = Vec::new();
    for len in 0..=max_len {
        let budget = (max_len + 1 - len) as u64;
        for code in all_strings(len) {
            if let OracleRun::Halted { output, steps } = oracle_run(&code, n, budget, Some(x)) {
                if output == x {
                    found.push((code, steps));
                }
            }
        }
    }
    found
}

// BBP: fractional part of 16^d * sum_k 1/(16^k (8k + j)).
fn bbp_series(j: u64, d: u64) -> f64 {
    let mut sum = 0.0f64;
    for k in 0..=d {
        let denom = 8 * k + j;
        let mut power = 1u64;
        let mut base = 16u64 % denom;
        let mut e = d - k;
        while e > 0 {
            if e & 1 == 1 {
                power = power * base % denom;
            }
            base = base * base % denom;
            e >>= 1;
        }
        sum += power as f64 / denom as f64;
        sum -= sum.floor();
    }
    let mut k = d + 1;
    loop {
        let term = 16f64.powi(-((k - d) as i32)) / (8 * k + j) as f64;
        if term < 1e-17 {
            break;
        }
        sum += term;
        k += 1;
    }
    sum - sum.floor()
}

/// Hex digit `d + 1` after the point of π (d = 0 is the first).
pub fn bbp_hex_digit(d: u64) -> u8 {
    let x = 4.0 * bbp_series(1, d) - 2.0 * bbp_series(4, d) - bbp_series(5, d) - bbp_series(6, d);
    let frac = x - x.floor();
    (frac * 16.0).floor() as u8
}

/// First `count` fractional bits of π from BBP digit extraction.
pub fn bbp_pi_bits(count: usize) -> String {
    let digits = count.div_ceil(4);
    let mut s = String::new();
    for d in 0..digits as u64 {
        s.push_str(&format!("{:04b}", bbp_hex_digit(d)));
    }
    s.truncate(count);
    s
}

/// Published hexadecimal expansion of π after the point.
pub const PI_HEX: &str = "243F6A8885A308D313198A2E03707344A4093822299F31D0082EFA98EC4E6C89452821E638D01377BE5466CF34E90C6CC0AC29B7C97C50DD3F84D5B5B5470917";
