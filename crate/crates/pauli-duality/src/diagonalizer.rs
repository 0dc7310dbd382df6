//! Clifford synthesis that makes a commuting tableau diagonal, followed by CX
//! column elimination of the resulting `Z` block.

use crate::pauli_core::{bit_ones, CliffordCircuit, Gate, PauliError, SignedTableau};

/// Circuit `U` with `U H U^†` diagonal, and the conjugated tableau.
///
/// Pivots are chosen row by row as the lowest unused column carrying an `X`.
/// CX gates reduce each pivot row's `X` part to its pivot, CZ and S gates then
/// clear the pivot rows' `Z` parts, and a final H layer on the pivots swaps the
/// remaining `X` letters into `Z` letters. The returned tableau is the circuit
/// replayed on the untouched input.
pub fn diagonalize(t: &SignedTableau) -> Result<(CliffordCircuit, SignedTableau), PauliError> {
    t.check_commuting()?;
    let n = t.n();
    let mut work = t.clone();
    let mut c = CliffordCircuit::new(n);
    let mut emit = |work: &mut SignedTableau, g: Gate| {
        work.apply_gate_unchecked(g);
        c.push(g);
    };
    let mut used = vec![false; n];
    let mut pivots = Vec::new();
    for r in 0..work.m() {
        let Some(j) = bit_ones(work.x_row(r)).find(|&q| !used[q]) else {
            continue;
        };
        used[j] = true;
        let others: Vec<usize> = bit_ones(work.x_row(r)).filter(|&q| q != j).collect();
        for k in others {
            emit(&mut work, Gate::CX(j, k));
        }
        pivots.push((r, j));
    }
    for &(r, j) in &pivots {
        let zs: Vec<usize> = bit_ones(work.z_row(r)).filter(|&q| q != j).collect();
        for q in zs {
            emit(&mut work, Gate::CZ(j, q));
        }
        if work.z_bit(r, j) {
            emit(&mut work, Gate::S(j));
        }
    }
    for &(_, j) in &pivots {
        emit(&mut work, Gate::H(j));
    }
    let out = t.conjugated(&c)?;
    debug_assert_eq!(out, work);
    out.require_diagonal()?;
    Ok((c, out))
}

/// CX column elimination on a diagonal tableau.
///
/// Rows are scanned in order; the first unused column `j` with `z_ij = 1`
/// becomes the row's pivot and `CX(k, j)` is emitted for every other `k` in the
/// row, leaving row `i` as a single `Z_j`.
pub fn pseudo_gaussian(t: &SignedTableau) -> Result<(CliffordCircuit, SignedTableau), PauliError> {
    t.require_diagonal()?;
    let (n, m, w) = (t.n(), t.m(), t.words());
    let mut work = t.clone();
    let mut c = CliffordCircuit::new(n);
    let mut used = vec![false; n];
    let mut mask = vec![0u64; w];
    for i in 0..m {
        let Some(j) = bit_ones(work.z_row(i)).find(|&q| !used[q]) else {
            continue;
        };
        used[j] = true;
        mask.copy_from_slice(work.z_row(i));
        mask[j / 64] &= !(1u64 << (j % 64));
        for k in bit_ones(&mask) {
            c.push(Gate::CX(k, j));
        }
        // The CX gates share target `j`: each row containing `j` toggles every control.
        let (jw, jb) = (j / 64, 1u64 << (j % 64));
        for row in work.z_words_mut().chunks_mut(w) {
            if row[jw] & jb != 0 {
                for (a, b) in row.iter_mut().zip(&mask) {
                    *a ^= b;
                }
            }
        }
    }
    let out = t.conjugated(&c)?;
    debug_assert_eq!(out, work);
    Ok((c, out))
}

/// `diagonalize` followed by `pseudo_gaussian`, with the concatenated circuit.
pub fn full_pipeline(t: &SignedTableau) -> Result<(CliffordCircuit, SignedTableau), PauliError> {
    let (mut c, d) = diagonalize(t)?;
    let (g, out) = pseudo_gaussian(&d)?;
    c.extend(&g);
    Ok((c, out))
}
