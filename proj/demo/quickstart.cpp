// Library walkthrough on a small synthetic corpus: train a teacher, label
// contacts, train a student and compare two groups with the Complexity AUC.
//
//   ./quickstart

#include <iostream>

#include "ccx/cauc.hpp"
#include "ccx/corpus.hpp"
#include "ccx/student.hpp"
#include "ccx/teacher.hpp"

int main() {
  ccx::CorpusConfig corpus_cfg;
  corpus_cfg.n_contacts = 3000;
  const auto generated = ccx::generate_corpus(corpus_cfg);
  const auto& corpus = generated.corpus;

  ccx::TeacherConfig teacher_cfg;
  teacher_cfg.rounds = 30;
  const auto fit = ccx::train_teacher(corpus.transcripts, teacher_cfg);
  std::cout << "teacher vocabulary: " << fit.model.vocab.size() << " tokens\n";

  const auto& first = corpus.transcripts.front();
  const auto t = fit.model.triple(first);
  std::cout << first.id << ": L=" << t.length << " H=" << t.entropy << " S=" << t.skill << " Q=" << fit.model.score(first)
            << '\n';

  const auto labels = ccx::make_labels(fit.scores, 0.8);
  const auto [train, test] = ccx::split_indices(corpus.records.size(), 0.2, 1);
  std::vector<ccx::PreContactRecord> r_train, r_test;
  std::vector<int> y_train, y_test;
  for (auto i : train) r_train.push_back(corpus.records[i]), y_train.push_back(labels[i]);
  for (auto i : test) r_test.push_back(corpus.records[i]), y_test.push_back(labels[i]);

  const auto student = ccx::train_student(r_train, y_train, ccx::StudentConfig{});
  std::vector<int> predictions;
  for (const auto& r : r_test) predictions.push_back(student.predict(r));
  const auto pr = ccx::evaluate(predictions, y_test);
  auto show = [](const std::optional<double>& v) { return v ? std::to_string(*v) : std::string("undefined"); };
  std::cout << "student precision " << show(pr.precision) << " recall " << show(pr.recall) << '\n';

  // Contacts the student flags versus everyone else.
  std::vector<double> flagged, rest;
  for (std::size_t k = 0; k < test.size(); ++k) (predictions[k] ? flagged : rest).push_back(fit.scores[test[k]]);
  if (flagged.size() >= 2) {
    const auto curve = ccx::complexity_auc(rest, flagged);
    std::cout << "flagged vs rest: AUC " << curve.auc << ", effectiveness " << curve.effectiveness << '\n';
  }
}
