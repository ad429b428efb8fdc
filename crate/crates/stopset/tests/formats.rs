use proptest::prelude::*;
use stopset::formats::{export, from_alist, from_dense, import, to_alist, to_dense, Format};
use stopset_core::codes::{build, CodeFamily, Construction, Family, ParityCheckMatrix};
use stopset_core::gf2::{BitMatrix, BitVector};

fn matrix() -> impl Strategy<Value = BitMatrix> {
    (1usize..=40, 1usize..=12).prop_flat_map(|(cols, rows)| {
        prop::collection::vec(prop::collection::vec(any::<bool>(), cols), rows).prop_map(move |bits| {
            let rows = bits
                .iter()
                .map(|r| {
                    let support: Vec<usize> = r.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i + 1).collect();
                    BitVector::from_support(cols, &support).unwrap()
                })
                .collect();
            BitMatrix::from_rows(cols, rows).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn dense_round_trip(h in matrix()) {
        prop_assert_eq!(from_dense(&to_dense(&h)).unwrap(), h);
    }

    #[test]
    fn alist_round_trip(h in matrix()) {
        prop_assert_eq!(from_alist(&to_alist(&h)).unwrap(), h);
    }

    #[test]
    fn json_round_trip(h in matrix()) {
        let pcm = ParityCheckMatrix::external(h.clone(), None).unwrap();
        let text = export(&pcm, Format::Json).unwrap();
        let back = import(&text, Format::Json, None).unwrap();
        prop_assert_eq!(back.matrix(), &h);
    }
}

#[test]
fn constructions_round_trip_in_every_format() {
    for family in Family::ALL {
        let f = CodeFamily::new(family, 3).unwrap();
        for construction in [Construction::H1, Construction::H2, Construction::H3, Construction::H4, Construction::FullRank] {
            let Ok(h) = build(f, construction) else { continue };
            for format in [Format::Alist, Format::Dense, Format::Json] {
                let text = export(&h, format).unwrap();
                let back = import(&text, format, Some(f)).unwrap();
                assert_eq!(back.matrix(), h.matrix(), "{family:?} {construction:?} {format:?}");
            }
        }
    }
}
