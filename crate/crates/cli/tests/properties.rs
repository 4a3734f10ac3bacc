use proptest::prelude::*;

use poncelet_cli::config::{parse_centers, ConfigPatch};
use poncelet_cli::output::fmt_g;

proptest! {
    #[test]
    fn g_format_round_trips(x in prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO) {
        let back: f64 = fmt_g(x, 17).parse().unwrap();
        prop_assert_eq!(back.to_bits(), x.to_bits());
        let short: f64 = fmt_g(x, 15).parse().unwrap();
        prop_assert!((short - x).abs() <= 1e-14 * x.abs() || (x.abs() < 1e-300 && (short - x).abs() <= 1e-310));
        prop_assert!(!fmt_g(x, 15).contains(['E', ' ']));
    }

    #[test]
    fn g_format_uses_at_most_the_precision(x in -1e20f64..1e20, p in 1usize..17) {
        let s = fmt_g(x, p);
        let digits = s.split('e').next().unwrap().chars().filter(char::is_ascii_digit).collect::<String>();
        prop_assert!(digits.trim_start_matches('0').len() <= p, "{s}");
    }

    #[test]
    fn center_lists_round_trip(ks in prop::collection::btree_set(1u32..2000, 1..40)) {
        let text = ks.iter().map(u32::to_string).collect::<Vec<_>>().join(", ");
        prop_assert_eq!(parse_centers(&text).unwrap(), ks.into_iter().collect::<Vec<_>>());
    }

    #[test]
    fn center_ranges_expand(lo in 1u32..500, len in 0u32..200) {
        let hi = lo + len;
        prop_assert_eq!(parse_centers(&format!("{lo}..{hi}")).unwrap(), (lo..=hi).collect::<Vec<_>>());
        prop_assert_eq!(parse_centers(&format!("{lo}..={hi}")).unwrap(), (lo..=hi).collect::<Vec<_>>());
    }

    #[test]
    fn config_text_never_panics(text in "([a-z_]{1,10} ?= ?[0-9a-z.,]{0,10}\n|#[^\n]{0,10}\n|[^\n]{0,12}\n){0,6}") {
        let _ = ConfigPatch::parse(&text);
    }

    #[test]
    fn config_values_round_trip(samples in 64usize..100_000, seed: u64, ab in 1.0001f64..10.0, threads in 0usize..64) {
        let text = format!("samples = {samples}\nseed = {seed}\nab = {}\nthreads = {threads}\n", fmt_g(ab, 17));
        let p = ConfigPatch::parse(&text).unwrap();
        prop_assert_eq!(p.samples, Some(samples));
        prop_assert_eq!(p.seed, Some(seed));
        prop_assert_eq!(p.a_over_b, Some(ab));
        prop_assert_eq!(p.threads, Some(threads));
    }

    #[test]
    fn merge_prefers_the_upper_layer(lower in 64usize..1000, upper in 64usize..1000) {
        let base = ConfigPatch { samples: Some(lower), a: Some(2.0), b: Some(1.0), ..Default::default() };
        let top = ConfigPatch { samples: Some(upper), a_over_b: Some(3.0), ..Default::default() };
        let m = base.clone().merge(top);
        prop_assert_eq!(m.samples, Some(upper));
        prop_assert_eq!((m.a, m.b, m.a_over_b), (None, None, Some(3.0)));
        prop_assert_eq!(base.clone().merge(ConfigPatch::default()), base);
    }
}
