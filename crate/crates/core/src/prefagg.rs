//! Preference aggregation: many audiences in, one audience out.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::vaf::{Audience, ValueId};

/// A non-empty sequence of audiences over a common value set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PreferenceProfile {
    audiences: Vec<Audience>,
}

impl PreferenceProfile {
    pub fn new(audiences: Vec<Audience>) -> Result<Self> {
        let first = audiences.first().ok_or(Error::EmptyProfile)?;
        if let Some(bad) = audiences.iter().find(|a| a.len() != first.len()) {
            return Err(Error::AudienceMismatch {
                expected: first.len(),
                found: bad.len(),
            });
        }
        Ok(PreferenceProfile { audiences })
    }

    pub fn audiences(&self) -> &[Audience] {
        &self.audiences
    }

    pub fn agents(&self) -> usize {
        self.audiences.len()
    }

    pub fn value_count(&self) -> usize {
        self.audiences[0].len()
    }

    /// Agent `i` of the result is agent `permutation[i]` of `self`.
    pub fn permuted(&self, permutation: &[usize]) -> Self {
        PreferenceProfile {
            audiences: permutation
                .iter()
                .map(|&i| self.audiences[i].clone())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PrefRule {
    /// Rank-sum scoring. Equal scores are ordered by `tiebreak`, defaulting to
    /// the declared value order.
    Borda { tiebreak: Option<Audience> },
    /// Returns agent `index`'s audience.
    Dictator { index: usize },
}

impl PrefRule {
    pub fn borda() -> Self {
        PrefRule::Borda { tiebreak: None }
    }
}

pub fn borda_scores(profile: &PreferenceProfile) -> BTreeMap<ValueId, usize> {
    let k = profile.value_count();
    let mut scores: BTreeMap<ValueId, usize> = (0..k).map(|v| (ValueId::from(v), 0)).collect();
    for audience in profile.audiences() {
        for (pos, v) in audience.order().iter().enumerate() {
            *scores
                .get_mut(v)
                .expect("audience is over the profile's values") += k - 1 - pos;
        }
    }
    scores
}

pub fn aggregate_prefs(rule: &PrefRule, profile: &PreferenceProfile) -> Result<Audience> {
    match rule {
        PrefRule::Dictator { index } => profile.audiences().get(*index).cloned().ok_or_else(|| {
            Error::RuleProfileMismatch(format!(
                "dictator {index} but only {} agents",
                profile.agents()
            ))
        }),
        PrefRule::Borda { tiebreak } => {
            let k = profile.value_count();
            let tiebreak = match tiebreak {
                Some(t) if t.len() != k => {
                    return Err(Error::RuleProfileMismatch(format!(
                        "tie-break orders {} values, profile has {k}",
                        t.len()
                    )))
                }
                Some(t) => t.clone(),
                None => Audience::identity(k),
            };
            let scores = borda_scores(profile);
            let mut order: Vec<ValueId> = (0..k).map(ValueId::from).collect();
            order.sort_by_key(|v| {
                (
                    Reverse(scores[v]),
                    Reverse(tiebreak.rank(*v).expect("tie-break covers every value")),
                )
            });
            Audience::new(order)
        }
    }
}

/// Agents ranking `v1` above `v2`.
pub fn support_count_pref(
    profile: &PreferenceProfile,
    v1: ValueId,
    v2: ValueId,
) -> Result<BTreeSet<usize>> {
    for v in [v1, v2] {
        if v.index() >= profile.value_count() {
            return Err(Error::UnknownValue(v.to_string()));
        }
    }
    if v1 == v2 {
        return Err(Error::EqualValues);
    }
    Ok(profile
        .audiences()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.prefers(v1, v2))
        .map(|(i, _)| i)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::running_vaf;
    use crate::vaf::Vaf;

    fn panel(vaf: &Vaf) -> PreferenceProfile {
        PreferenceProfile::new(vec![
            vaf.audience(&["EV", "IE", "SF", "ER"]).unwrap(),
            vaf.audience(&["EV", "ER", "SF", "IE"]).unwrap(),
            vaf.audience(&["SF", "ER", "EV", "IE"]).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn borda_scores_of_the_panel() {
        let vaf = running_vaf();
        let scores = borda_scores(&panel(&vaf));
        let named: BTreeMap<&str, usize> = scores
            .iter()
            .map(|(v, s)| (vaf.values().name(v.index()), *s))
            .collect();
        assert_eq!(
            named,
            BTreeMap::from([("ER", 4), ("EV", 7), ("IE", 2), ("SF", 5)])
        );
    }

    #[test]
    fn borda_single_and_opposite() {
        let a = Audience::new(vec![ValueId(2), ValueId(0), ValueId(1)]).unwrap();
        let single = PreferenceProfile::new(vec![a.clone()]).unwrap();
        for (v, s) in borda_scores(&single) {
            assert_eq!(s, a.rank(v).unwrap());
        }
        let rev = Audience::new(vec![ValueId(1), ValueId(0), ValueId(2)]).unwrap();
        let opposite = PreferenceProfile::new(vec![a, rev]).unwrap();
        assert!(borda_scores(&opposite).values().all(|&s| s == 2));
    }

    #[test]
    fn borda_outcome_of_the_panel() {
        let vaf = running_vaf();
        let out = aggregate_prefs(&PrefRule::borda(), &panel(&vaf)).unwrap();
        assert_eq!(out, vaf.audience(&["EV", "SF", "ER", "IE"]).unwrap());
    }

    #[test]
    fn borda_with_explicit_tiebreak() {
        let vaf = running_vaf();
        let profile = PreferenceProfile::new(vec![
            vaf.audience(&["EV", "IE", "SF", "ER"]).unwrap(),
            vaf.audience(&["EV", "ER", "IE", "SF"]).unwrap(),
            vaf.audience(&["SF", "ER", "EV", "IE"]).unwrap(),
        ])
        .unwrap();
        let rule = PrefRule::Borda {
            tiebreak: Some(vaf.audience(&["ER", "SF", "IE", "EV"]).unwrap()),
        };
        let out = aggregate_prefs(&rule, &profile).unwrap();
        assert_eq!(out, vaf.audience(&["EV", "ER", "SF", "IE"]).unwrap());
    }

    #[test]
    fn dictator_copies_its_agent() {
        let vaf = running_vaf();
        let p = panel(&vaf);
        assert_eq!(
            aggregate_prefs(&PrefRule::Dictator { index: 0 }, &p).unwrap(),
            p.audiences()[0]
        );
        assert!(matches!(
            aggregate_prefs(&PrefRule::Dictator { index: 3 }, &p),
            Err(Error::RuleProfileMismatch(_))
        ));
        let bad_tiebreak = PrefRule::Borda {
            tiebreak: Some(Audience::identity(2)),
        };
        assert!(matches!(
            aggregate_prefs(&bad_tiebreak, &p),
            Err(Error::RuleProfileMismatch(_))
        ));
    }

    #[test]
    fn supporters() {
        let vaf = running_vaf();
        let p = panel(&vaf);
        let ev = vaf.value_id("EV").unwrap();
        let er = vaf.value_id("ER").unwrap();
        assert_eq!(
            support_count_pref(&p, ev, er).unwrap(),
            BTreeSet::from([0, 1])
        );
        assert!(matches!(
            support_count_pref(&p, ev, ev),
            Err(Error::EqualValues)
        ));
        let unanimous = PreferenceProfile::new(vec![Audience::identity(3); 3]).unwrap();
        assert_eq!(
            support_count_pref(&unanimous, ValueId(0), ValueId(1)).unwrap(),
            BTreeSet::from([0, 1, 2])
        );
    }

    #[test]
    fn profile_validation() {
        assert!(matches!(
            PreferenceProfile::new(vec![]),
            Err(Error::EmptyProfile)
        ));
        assert!(matches!(
            PreferenceProfile::new(vec![Audience::identity(3), Audience::identity(2)]),
            Err(Error::AudienceMismatch { .. })
        ));
    }
}
