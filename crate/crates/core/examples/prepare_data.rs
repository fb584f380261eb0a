//! Preprocessing: binarize a small raw table with a recipe, split it into
//! train / suing / test parts and mine antecedents on the suing group.
//!
//! cargo run --example prepare_data

use fairwash::data::{parse_csv, RawTable, Recipe, DEFAULT_CATEGORY_CAP};
use fairwash::{mine_antecedents, split_dataset, SplitSpec};

const RAW: &str = "\
age,workclass,hours,sex,income
23,private,40,F,<=50K
45,self-emp,60,M,>50K
37,private,45,M,>50K
52,gov,40,F,>50K
29,private,38,F,<=50K
61,self-emp,20,M,<=50K
33,gov,50,M,>50K
41,private,40,F,<=50K
26,private,35,M,<=50K
48,gov,45,F,>50K
";

const RECIPE: &str = "\
# numeric columns become interval indicators
age: buckets=[30,45]
hours: buckets=[40]
workclass: onehot
sex: sensitive=M
income: label=>50K
";

fn main() -> fairwash::Result<()> {
    let recipe = Recipe::parse(RECIPE)?;
    let binary = recipe.apply(&RawTable::parse(RAW)?, DEFAULT_CATEGORY_CAP)?;
    println!("binary columns: {}", binary.headers.join(", "));

    let text = std::iter::once(binary.headers.join(","))
        .chain(binary.rows.iter().map(|r| r.join(",")))
        .collect::<Vec<_>>()
        .join("\n");
    let d = parse_csv("adult-toy", &text, recipe.sensitive_column(), recipe.label_column())?;

    let (train, suing, test) = split_dataset(&d, &SplitSpec::new(0.4, 0.4, 0.2, 7)?)?;
    println!(
        "split rows: train {:?}, suing {:?}, test {:?}",
        train.row_ids(),
        suing.row_ids(),
        test.row_ids()
    );

    let ants = mine_antecedents(&suing, 0.25, true)?;
    println!("{} antecedents with support >= 0.25 on the suing group:", ants.len());
    for a in ants.iter() {
        println!("  {:>2}  {:<22} support {:.2}", a.id, a.name, a.support);
    }
    Ok(())
}
