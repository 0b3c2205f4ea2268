//! Structural invariants: split inverse, scoring additivity, resume
//! stability.

use codeplan_client::MockTransport;
use codeplan_core::{render_plan_block, split_continuation};
use codeplan_runner::{score_sequence, ScoreRequest};
use proptest::prelude::*;

proptest! {
    // Rendering a plan and response into one continuation, then
    // splitting it, returns the originals for fence-free inputs.
    #[test]
    fn split_inverts_render(
        plan in "[a-zA-Z0-9 =+\\-*/():\n]{1,120}",
        response in "[a-zA-Z0-9 .,?!\n]{0,120}",
    ) {
        prop_assume!(!plan.contains("```") && !response.contains("```"));
        prop_assume!(!plan.trim().is_empty());
        // The splitter hands back the response with leading whitespace
        // dropped and the plan without a trailing newline; compare
        // against the same normalization.
        let continuation = format!("{}\n{}", render_plan_block(&plan), response);
        let (got_plan, got_response) = split_continuation(&continuation).expect("closed fence");
        prop_assert_eq!(got_plan, plan.strip_suffix('\n').unwrap_or(&plan).to_string());
        prop_assert_eq!(got_response, response.trim_start().to_string());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    // Scoring a concatenated target equals scoring its halves with the
    // context advanced, when per-token NLL depends only on absolute
    // position. This is the plumbing the two-term decomposition needs.
    #[test]
    fn scoring_is_additive_across_any_split(
        context in "[a-z ]{0,24}",
        target in "[a-z ]{2,40}",
        cut_ratio in 0.0f64..1.0,
    ) {
        let cut = ((target.len() as f64 * cut_ratio) as usize).clamp(1, target.len() - 1);
        let (a, b) = target.split_at(cut);

        let rt = tokio::runtime::Builder::new_current_thread().enable_all().build().unwrap();
        let (whole, first, second) = rt.block_on(async {
            let mock = MockTransport::returning(|_| String::new()).positional_score();
            let whole = score_sequence(&mock, &ScoreRequest::new(context.clone(), target.clone()))
                .await
                .unwrap();
            let first = score_sequence(&mock, &ScoreRequest::new(context.clone(), a.to_string()))
                .await
                .unwrap();
            let second = score_sequence(
                &mock,
                &ScoreRequest::new(format!("{context}{a}"), b.to_string()),
            )
            .await
            .unwrap();
            (whole, first, second)
        });

        prop_assert_eq!(whole.sum_nll, first.sum_nll + second.sum_nll);
        prop_assert_eq!(whole.n_tokens, first.n_tokens + second.n_tokens);
    }
}

#[tokio::test]
async fn additivity_matches_the_two_stage_layout() {
    // Exactly the decomposition shape: score(X, Z) + score(X+Z, Y)
    // equals score(X, Z+Y).
    let mock = MockTransport::returning(|_| String::new()).positional_score();
    let x = "Question: flip?\nAnswer:";
    let z = "\n```\nstate = True\n```\n";
    let y = "The answer is yes.";

    let stage1 = score_sequence(&mock, &ScoreRequest::new(x, z)).await.unwrap();
    let stage2 = score_sequence(&mock, &ScoreRequest::new(format!("{x}{z}"), y)).await.unwrap();
    let joint = score_sequence(&mock, &ScoreRequest::new(x, format!("{z}{y}"))).await.unwrap();

    assert_eq!(joint.sum_nll, stage1.sum_nll + stage2.sum_nll);
    assert_eq!(joint.n_tokens, stage1.n_tokens + stage2.n_tokens);
}
