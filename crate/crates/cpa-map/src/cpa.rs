//! Constraint aggregation for ground clauses that share all but one literal.
//!
//! Groundings of equal weight and length are tabulated positionally, a
//! varying column is picked greedily (the one whose removal leaves the
//! fewest distinct residues), and each residue becomes the shared context
//! of one aggregated group. A group compiles to a constant number of ILP
//! rows plus one integer counting variable instead of one row and one
//! binary per grounding, and is only kept when that is strictly fewer rows.

use std::collections::{HashMap, HashSet};

use crate::atoms::{AtomId, GroundClause};
use crate::ilp::{IlpModel, Sense};
use crate::interpretation::Interpretation;
use crate::model::Weight;

/// Groundings `l_i v c` collapsed over their varying literal `l_i`.
///
/// `members` holds the varying literals with their substitution
/// multiplicities; `context` holds the shared remainder clause (possibly
/// empty). All members carry the same soft weight.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregatedGroup {
    pub weight: f64,
    pub formula_id: usize,
    pub context: Vec<(AtomId, bool)>,
    pub members: Vec<(AtomId, bool, u32)>,
}

impl AggregatedGroup {
    /// Upper bound of the group counter: total multiplicity over members.
    pub fn total_multiplicity(&self) -> u64 {
        self.members.iter().map(|&(_, _, m)| u64::from(m)).sum()
    }

    /// Number of satisfied groundings the group represents under `interp`,
    /// weighted by multiplicity. If the shared context is satisfied every
    /// member clause is satisfied.
    pub fn feature_value(&self, interp: &Interpretation) -> u64 {
        let context_sat = self
            .context
            .iter()
            .any(|&(a, neg)| interp.is_true(a) != neg);
        if context_sat {
            return self.total_multiplicity();
        }
        self.members
            .iter()
            .filter(|&&(a, neg, _)| interp.is_true(a) != neg)
            .map(|&(_, _, m)| u64::from(m))
            .sum()
    }
}

/// Result of partitioning: groups worth aggregating, plus the groundings
/// left to per-clause translation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AggregationPlan {
    pub groups: Vec<AggregatedGroup>,
    pub singletons: Vec<GroundClause>,
}

impl AggregationPlan {
    /// Number of ILP rows this plan will emit.
    pub fn row_count(&self) -> usize {
        let group_rows: usize = self.groups.iter().map(group_row_cost).sum();
        group_rows + self.singletons.len()
    }
}

fn group_row_cost(g: &AggregatedGroup) -> usize {
    if g.weight > 0.0 {
        // Counting row, plus an explicit cap row when a context exists.
        if g.context.is_empty() {
            1
        } else {
            2
        }
    } else {
        // Member row plus one forcing row per context literal.
        1 + g.context.len()
    }
}

/// Splits groundings into aggregated groups and leftover singletons.
///
/// Rows are bucketed by exact weight and literal count; hard rows are never
/// aggregated. Within a bucket the varying column is the one minimizing the
/// number of distinct projections onto the remaining columns (ties broken
/// toward the leftmost column). A group is aggregated only when its rows
/// strictly outnumber the rows its aggregation emits; everything else falls
/// back to singletons, so aggregation never increases the row count.
pub fn partition_for_aggregation(rows: &[GroundClause]) -> AggregationPlan {
    let mut plan = AggregationPlan::default();
    let mut bucket_index: HashMap<(u64, usize), usize> = HashMap::new();
    let mut buckets: Vec<Vec<&GroundClause>> = Vec::new();
    for row in rows {
        let w = match row.weight {
            Weight::Hard => {
                plan.singletons.push(row.clone());
                continue;
            }
            Weight::Soft(w) => w,
        };
        let key = (w.to_bits(), row.literals.len());
        let idx = *bucket_index.entry(key).or_insert_with(|| {
            buckets.push(Vec::new());
            buckets.len() - 1
        });
        buckets[idx].push(row);
    }
    for bucket in buckets {
        partition_bucket(&bucket, &mut plan);
    }
    plan
}

fn partition_bucket(bucket: &[&GroundClause], plan: &mut AggregationPlan) {
    let len = bucket[0].literals.len();
    if bucket.len() == 1 {
        plan.singletons.push(bucket[0].clone());
        return;
    }
    let weight = match bucket[0].weight {
        Weight::Soft(w) => w,
        Weight::Hard => unreachable!("hard rows are filtered before bucketing"),
    };

    // Column whose removal leaves the fewest distinct residues.
    let mut best: Option<(usize, usize)> = None;
    for k in 0..len {
        let mut residues: HashSet<Vec<(AtomId, bool)>> = HashSet::new();
        for row in bucket {
            residues.insert(projection(row, k));
        }
        let candidate = (residues.len(), k);
        if best.is_none_or(|b| candidate < b) {
            best = Some(candidate);
        }
    }
    let d = best.expect("bucket rows always have at least one literal").1;

    // Group rows by their shared context, keeping first-seen order.
    let mut group_index: HashMap<Vec<(AtomId, bool)>, usize> = HashMap::new();
    let mut groups: Vec<(Vec<(AtomId, bool)>, Vec<&GroundClause>)> = Vec::new();
    for row in bucket {
        let context = projection(row, d);
        let idx = *group_index.entry(context.clone()).or_insert_with(|| {
            groups.push((context, Vec::new()));
            groups.len() - 1
        });
        groups[idx].1.push(row);
    }

    for (context, members) in groups {
        let rows_direct = members.len();
        let rows_aggregated = if weight > 0.0 {
            if context.is_empty() {
                1
            } else {
                2
            }
        } else {
            1 + context.len()
        };
        if rows_aggregated >= rows_direct {
            plan.singletons.extend(members.iter().map(|&r| r.clone()));
            continue;
        }
        plan.groups.push(AggregatedGroup {
            weight,
            formula_id: members[0].formula_id,
            context,
            members: merge_members(&members, d),
        });
    }
}

fn projection(row: &GroundClause, skip: usize) -> Vec<(AtomId, bool)> {
    row.literals
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != skip)
        .map(|(_, &lit)| lit)
        .collect()
}

/// Collects the varying-column literals, summing multiplicities of rows
/// that simplified to the same literal.
fn merge_members(rows: &[&GroundClause], d: usize) -> Vec<(AtomId, bool, u32)> {
    let mut out: Vec<(AtomId, bool, u32)> = Vec::with_capacity(rows.len());
    let mut index: HashMap<(AtomId, bool), usize> = HashMap::new();
    for row in rows {
        let (atom, neg) = row.literals[d];
        match index.entry((atom, neg)) {
            std::collections::hash_map::Entry::Occupied(e) => {
                out[*e.get()].2 += row.multiplicity;
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(out.len());
                out.push((atom, neg, row.multiplicity));
            }
        }
    }
    out
}

/// Compiles one aggregated group into the ILP.
///
/// Positive weight: the counter is capped by the multiplicity-weighted
/// satisfied members plus a full-count credit when the context holds.
/// Negative weight: the counter is forced up to the satisfied-member count,
/// and to the full count whenever any context literal holds.
pub fn translate_group(ilp: &mut IlpModel, group: &AggregatedGroup) {
    let n = group.total_multiplicity() as i64;
    let mut terms: Vec<(i64, crate::ilp::VarId)> = Vec::with_capacity(group.members.len() + 2);
    let mut rhs = 0i64;
    for &(atom, neg, m) in &group.members {
        let v = ilp.atom_var(atom);
        let m = i64::from(m);
        if neg {
            terms.push((-m, v));
            rhs -= m;
        } else {
            terms.push((m, v));
        }
    }
    let z;
    if group.weight > 0.0 {
        for &(atom, neg) in &group.context {
            let v = ilp.atom_var(atom);
            if neg {
                terms.push((-n, v));
                rhs -= n;
            } else {
                terms.push((n, v));
            }
        }
        z = ilp.new_aux(n);
        terms.push((-1, z));
        ilp.add_constraint(terms, Sense::Ge, rhs);
        if !group.context.is_empty() {
            ilp.add_constraint(vec![(1, z)], Sense::Le, n);
        }
    } else {
        z = ilp.new_aux(n);
        terms.push((-1, z));
        ilp.add_constraint(terms, Sense::Le, rhs);
        for &(atom, neg) in &group.context {
            let v = ilp.atom_var(atom);
            if neg {
                ilp.add_constraint(vec![(-n, v), (-1, z)], Sense::Le, -n);
            } else {
                ilp.add_constraint(vec![(n, v), (-1, z)], Sense::Le, 0);
            }
        }
    }
    ilp.objective.push((group.weight, z));
}
