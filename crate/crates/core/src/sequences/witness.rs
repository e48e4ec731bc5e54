//! Constructions that turn subsequence chains and connecting K-chains into a
//! single sequence containing both ends of the equivalence.

use serde::Serialize;

use super::{embed, CoarseSequencePrefix, SubsequenceWitness};
use crate::chains::KChain;
use crate::error::{Error, Result};
use crate::metric::PointId;
use crate::within;

/// A sequence together with embeddings of two inputs into it.
#[derive(Debug, Clone, Serialize)]
pub struct Supersequence {
    pub sequence: CoarseSequencePrefix,
    pub first: SubsequenceWitness,
    pub second: SubsequenceWitness,
}

/// A K-chain joining `s[s_index]` to `t[t_index]`.
#[derive(Debug, Clone, Serialize)]
pub struct Stitch {
    pub s_index: usize,
    pub t_index: usize,
    pub chain: KChain,
}

impl Stitch {
    /// A chain joining `s[n]` to `t[n]`.
    pub fn at(n: usize, chain: KChain) -> Self {
        Stitch {
            s_index: n,
            t_index: n,
            chain,
        }
    }
}

fn check_based(seqs: &[&CoarseSequencePrefix]) -> Result<()> {
    let first = seqs[0];
    for s in seqs {
        if !s.same_sample(first) {
            return Err(Error::MismatchedSamples);
        }
        if !s.based() {
            return Err(Error::InvalidSequence(
                "supersequence constructions need based sequences".into(),
            ));
        }
    }
    Ok(())
}

fn embedding(sub: &CoarseSequencePrefix, sup: &CoarseSequencePrefix) -> SubsequenceWitness {
    SubsequenceWitness {
        index_map: embed(sub.terms(), sup.terms()).expect("construction embeds its inputs"),
    }
}

/// Given `t ⊑ s` and `t ⊑ r`, builds `r'` containing both `s` and `r`.
///
/// Between consecutive terms `t_k, t_{k+1}` the output visits the terms `s`
/// has there and, after stepping back to `t_k`, the terms `r` has there:
/// `t_k, s-block, t_{k+1}, t_k, r-block, t_{k+1}`. An empty s-block drops the
/// first pass and the return to `t_k`; an empty r-block drops the return and
/// the second pass. Terms after the last `t` term are handled the same way:
/// the s-tail is walked out and back before the r-tail.
///
/// Every step of the output is a step of `s`, `t` or `r`, so the output is an
/// N-sequence for the largest of the three bounds.
pub fn merge_supersequence(
    s: &CoarseSequencePrefix,
    t: &CoarseSequencePrefix,
    r: &CoarseSequencePrefix,
    t_in_s: &SubsequenceWitness,
    t_in_r: &SubsequenceWitness,
) -> Result<Supersequence> {
    check_based(&[s, t, r])?;
    for (w, sup, name) in [(t_in_s, s, "t ⊑ s"), (t_in_r, r, "t ⊑ r")] {
        if !w.verify(t, sup) {
            return Err(Error::InvalidWitness(format!("{name} does not embed t")));
        }
        if w.index_map[0] != 0 {
            return Err(Error::InvalidWitness(format!(
                "{name} must map the basepoint term to index 0"
            )));
        }
    }

    let (st, tt, rt) = (s.terms(), t.terms(), r.terms());
    let (is, ir) = (&t_in_s.index_map, &t_in_r.index_map);
    let mut out: Vec<PointId> = vec![tt[0]];
    for k in 0..tt.len() - 1 {
        let s_block = &st[is[k] + 1..is[k + 1]];
        let r_block = &rt[ir[k] + 1..ir[k + 1]];
        out.extend_from_slice(s_block);
        if !s_block.is_empty() && !r_block.is_empty() {
            out.push(tt[k + 1]);
            out.push(tt[k]);
        }
        out.extend_from_slice(r_block);
        out.push(tt[k + 1]);
    }
    let last = tt.len() - 1;
    let s_tail = &st[is[last] + 1..];
    let r_tail = &rt[ir[last] + 1..];
    out.extend_from_slice(s_tail);
    if !s_tail.is_empty() && !r_tail.is_empty() {
        out.extend(s_tail[..s_tail.len() - 1].iter().rev());
        out.push(tt[last]);
    }
    out.extend_from_slice(r_tail);

    let merged = CoarseSequencePrefix::new(s.sample().clone(), out)?;
    debug_assert!(within(
        merged.chain_bound(),
        s.chain_bound().max(t.chain_bound()).max(r.chain_bound())
    ));
    Ok(Supersequence {
        first: embedding(s, &merged),
        second: embedding(r, &merged),
        sequence: merged,
    })
}

/// One sequence containing both ends of a chain `c_0, ..., c_n` in which each
/// adjacent pair is related by subsequence (in either direction).
///
/// Walks the chain keeping a running supersequence `U` of `c_0` and `c_i`:
/// when `c_{i+1} ⊑ c_i` nothing changes, and when `c_i ⊑ c_{i+1}` the running
/// sequence is replaced by [`merge_supersequence`] of `U` and `c_{i+1}` over
/// `c_i`. `first` embeds `c_0` and `second` embeds `c_n`.
pub fn common_supersequence(chain: &[CoarseSequencePrefix]) -> Result<Supersequence> {
    let Some(head) = chain.first() else {
        return Err(Error::InvalidSequence("empty chain".into()));
    };
    check_based(&chain.iter().collect::<Vec<_>>())?;

    let mut acc = head.clone();
    let mut head_in_acc = SubsequenceWitness::identity(head.len());
    let mut cur_in_acc = head_in_acc.clone();
    for (i, pair) in chain.windows(2).enumerate() {
        let (cur, next) = (&pair[0], &pair[1]);
        if let Some(map) = embed(next.terms(), cur.terms()) {
            cur_in_acc = SubsequenceWitness { index_map: map }.then(&cur_in_acc);
        } else if let Some(map) = embed(cur.terms(), next.terms()) {
            let merged = merge_supersequence(
                &acc,
                cur,
                next,
                &cur_in_acc,
                &SubsequenceWitness { index_map: map },
            )?;
            head_in_acc = head_in_acc.then(&merged.first);
            cur_in_acc = merged.second;
            acc = merged.sequence;
        } else {
            return Err(Error::NoSubsequenceRelation { index: i });
        }
    }
    Ok(Supersequence {
        sequence: acc,
        first: head_in_acc,
        second: cur_in_acc,
    })
}

/// Result of [`interleave_from_chains`].
#[derive(Debug, Clone, Serialize)]
pub struct Interleaved {
    pub sequence: CoarseSequencePrefix,
    pub s_witness: SubsequenceWitness,
    /// `None` only when there were no stitches and `t` is not already a
    /// subsequence of `s`.
    pub t_witness: Option<SubsequenceWitness>,
}

/// Builds one sequence containing `s` and `t` from chains joining them at
/// increasing index pairs `(a_1, b_1) < (a_2, b_2) < ...`.
///
/// The output runs `t` out to `t_{b_1}` and back to `x0`, then `s` out to
/// `s_{a_1}`. At stage `i` it crosses `c_i` to `t_{b_i}`, runs `t` forward to
/// `t_{b_{i+1}}` and back, recrosses `c_i` and runs `s` forward to
/// `s_{a_{i+1}}`. The last stage runs both sequences to the end of their
/// prefixes. With no stitches the output is `s`.
pub fn interleave_from_chains(
    s: &CoarseSequencePrefix,
    t: &CoarseSequencePrefix,
    stitches: &[Stitch],
) -> Result<Interleaved> {
    check_based(&[s, t])?;
    let sample = s.sample();
    let bad = |index: usize, reason: String| Error::InvalidStitch { index, reason };
    let mut prev: Option<(usize, usize)> = None;
    for (i, st) in stitches.iter().enumerate() {
        let (a, b) = (st.s_index, st.t_index);
        if prev.is_some_and(|(pa, pb)| a <= pa || b <= pb) {
            return Err(bad(i, format!("indices ({a}, {b}) do not increase")));
        }
        prev = Some((a, b));
        if a >= s.len() || b >= t.len() {
            return Err(bad(
                i,
                format!("indices ({a}, {b}) run past the end of a prefix"),
            ));
        }
        if st.chain.first() != Some(s.terms()[a]) || st.chain.last() != Some(t.terms()[b]) {
            return Err(bad(i, format!("chain does not join s[{a}] to t[{b}]")));
        }
        if !st.chain.is_valid(sample) {
            return Err(bad(
                i,
                format!("chain has a step longer than K = {}", st.chain.k),
            ));
        }
    }
    if stitches.is_empty() {
        return Ok(Interleaved {
            sequence: s.clone(),
            s_witness: SubsequenceWitness::identity(s.len()),
            t_witness: embed(t.terms(), s.terms())
                .map(|index_map| SubsequenceWitness { index_map }),
        });
    }

    let (ss, tt) = (s.terms(), t.terms());
    let (a1, b1) = (stitches[0].s_index, stitches[0].t_index);
    let mut out: Vec<PointId> = tt[..=b1].to_vec();
    out.extend(tt[..b1].iter().rev());
    out.extend_from_slice(&ss[1..=a1]);
    for (i, st) in stitches.iter().enumerate() {
        let (a, b) = (st.s_index, st.t_index);
        let (next_s, next_t) = match stitches.get(i + 1) {
            Some(next) => (next.s_index, next.t_index),
            None => (ss.len() - 1, tt.len() - 1),
        };
        let c = &st.chain.points;
        out.extend_from_slice(&c[1..]);
        out.extend_from_slice(&tt[b + 1..=next_t]);
        out.extend(tt[b..next_t].iter().rev());
        out.extend(c[..c.len() - 1].iter().rev());
        out.extend_from_slice(&ss[a + 1..=next_s]);
    }

    let sequence = CoarseSequencePrefix::new(sample.clone(), out)?;
    Ok(Interleaved {
        s_witness: embedding(s, &sequence),
        t_witness: Some(embedding(t, &sequence)),
        sequence,
    })
}
