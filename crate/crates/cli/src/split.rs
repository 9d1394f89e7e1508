use std::collections::BTreeSet;

use anyhow::{bail, Result};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::inputs::{doc_id_of, read_text, write_file};
use crate::{SplitArgs, Status};

fn document_ids(args: &SplitArgs) -> Result<Vec<String>> {
    let ids: BTreeSet<String> = if args.input.is_dir() {
        let mut ids = BTreeSet::new();
        for entry in std::fs::read_dir(&args.input)? {
            let path = entry?.path();
            if path.is_file() {
                ids.insert(doc_id_of(&path));
            }
        }
        ids
    } else {
        read_text(&args.input)?
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_owned)
            .collect()
    };
    Ok(ids.into_iter().collect())
}

/// Seeded shuffle into three manifests. Ids inside each manifest are sorted
/// so the files only depend on the membership, not the shuffle order.
pub fn split(args: &SplitArgs) -> Result<Status> {
    let mut ids = document_ids(args)?;
    let wanted = args.train + args.dev + args.test;
    if wanted != ids.len() {
        bail!(
            "split sizes {}+{}+{} = {} do not match the {} documents found",
            args.train,
            args.dev,
            args.test,
            wanted,
            ids.len()
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    ids.shuffle(&mut rng);

    let header = format!(
        "# seeded split (seed {}) of {} documents; not the original partition\n",
        args.seed,
        ids.len()
    );
    let (train, rest) = ids.split_at(args.train);
    let (dev, test) = rest.split_at(args.dev);
    for (name, part) in [("train.txt", train), ("dev.txt", dev), ("test.txt", test)] {
        let mut part = part.to_vec();
        part.sort();
        let mut body = header.clone();
        for id in part {
            body.push_str(&id);
            body.push('\n');
        }
        write_file(&args.out.join(name), body.as_bytes())?;
    }
    Ok(Status::Success)
}
