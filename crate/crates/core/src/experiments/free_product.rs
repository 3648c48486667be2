//! Alternating words `h_1 g k_1 g^-1 h_2 g k_2 g^-1 ...` and the free
//! product `H * gKg^-1`.

use super::{require_free, require_infinite_index, required, subgroups, ExperimentReport, Status, Table, Verdict};
use crate::config::{ExperimentConfig, ExperimentKind};
use crate::error::Result;
use crate::word::Word;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    H,
    K,
}

struct Syllable {
    side: Side,
    /// Formal length: `|h|` or `|g| + |k| + |g|`.
    len: usize,
    word: Word,
}

pub fn free_product_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    require_free(cfg, "free product")?;
    let oracle = &cfg.oracle;
    let (h, k) = subgroups(cfg)?;
    require_infinite_index(&h, &k)?;
    let g = oracle.normal_form(required(&cfg.conjugator, "elements.conjugator")?)?;
    let budget = cfg.file.budgets.length_budget;
    let cap = cfg.file.budgets.word_cap;

    let mut syllables = Vec::new();
    for x in h.elements(budget).into_iter().skip(1) {
        syllables.push(Syllable { side: Side::H, len: x.len(), word: x });
    }
    let g_inv = oracle.invert(&g)?;
    for x in k.elements(budget.saturating_sub(2 * g.len())).into_iter().skip(1) {
        let word = oracle.multiply(&oracle.multiply(&g, &x)?, &g_inv)?;
        syllables.push(Syllable { side: Side::K, len: x.len() + 2 * g.len(), word });
    }

    let mut words = vec![0u64; budget + 1];
    let mut trivial = vec![0u64; budget + 1];
    let mut examined = 0u64;
    let mut truncated = false;
    let mut stack: Vec<(Word, usize, Option<Side>)> = vec![(Word::identity(), 0, None)];
    'search: while let Some((product, len, last)) = stack.pop() {
        for s in syllables.iter().rev() {
            if Some(s.side) == last || len + s.len > budget {
                continue;
            }
            if examined == cap {
                truncated = true;
                break 'search;
            }
            examined += 1;
            let next = oracle.multiply(&product, &s.word)?;
            words[len + s.len] += 1;
            trivial[len + s.len] += u64::from(next.is_empty());
            stack.push((next, len + s.len, Some(s.side)));
        }
    }

    let mut table = Table::new(&["length", "words", "trivial"]);
    for n in 1..=budget {
        table.push([n.to_string(), words[n].to_string(), trivial[n].to_string()]);
    }
    let mut report = ExperimentReport::new(cfg, ExperimentKind::FreeProduct, table);
    report.fit("syllables", syllables.len() as f64);
    report.fit("words", examined as f64);
    let found = trivial.iter().sum::<u64>();
    let mut verdict = Verdict::at_most("trivial alternating words", found as f64, 0.0);
    if truncated && found == 0 {
        verdict = verdict.with_status(Status::Partial);
        report.notes.push(format!("word cap {cap} reached before the length budget {budget} was covered"));
    }
    report.verdicts.push(verdict);
    Ok(report)
}
