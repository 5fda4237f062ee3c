#include "hire/trainer.hpp"

#include "hire/adam.hpp"
#include "hire/error.hpp"
#include "hire/evaluate.hpp"

namespace hire {

void TrainConfig::validate() const {
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
  if (!(weight_decay >= 0.0)) throw ConfigError("weight_decay must be >= 0");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("dropout must lie in [0, 1)");
  if (!(train_fraction > 0.0 && train_fraction <= 1.0)) throw ConfigError("train_fraction must lie in (0, 1]");
  if (hidden < 1) throw ConfigError("hidden size must be >= 1");
  distill.validate();
}

std::vector<std::size_t> training_rows(const HetGraph& g, double train_fraction) {
  HetGraph view;
  view.splits.train = g.splits.train;
  restrict_train(view, train_fraction);
  if (view.splits.train.empty()) throw DegenerateInputError("train split is empty");
  return view.splits.train;
}

namespace {

struct Setup {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> labels;
  RunHistory history;
};

Setup prepare(const HetGraph& g, const TrainConfig& cfg) {
  cfg.validate();
  Setup s;
  s.rows = training_rows(g, cfg.train_fraction);
  for (std::size_t r : s.rows) s.labels.push_back(g.labels.at(r));
  for (const NodeType& t : g.node_types) s.history.type_names.push_back(t.name);
  return s;
}

std::vector<const Matrix*> const_view(const std::vector<Matrix*>& v) { return {v.begin(), v.end()}; }

std::vector<Matrix*> attention_pointers(AttentionParams& a) {
  std::vector<Matrix*> out;
  a.for_each([&](const std::string&, Matrix& m) { out.push_back(&m); });
  return out;
}

double validation_score(const GraphInput& input, const HetGraph& g, const ModelParams& params) {
  if (g.splits.val.empty()) return 0.0;
  return classification_scores(infer(input, params), g, g.splits.val).micro;
}

// Returns true when this epoch becomes the selected one.
bool select(RunHistory& h, const EpochRecord& rec, Selection mode, double& best) {
  h.epochs.push_back(rec);
  if (mode == Selection::kLastEpoch || h.epochs.size() == 1 || rec.val_micro_f1 > best) {
    best = rec.val_micro_f1;
    h.selected_epoch = rec.epoch;
    return true;
  }
  return false;
}

}  // namespace

TeacherRun pretrain_teacher(const HetGraph& g, const TrainConfig& cfg) {
  Setup s = prepare(g, cfg);
  const GraphInput input(g);
  Rng init_rng = Rng::substream(cfg.seed, "init");
  Rng dropout_rng = Rng::substream(cfg.seed, "dropout");
  ModelParams params = init_model(g, init_rng, cfg.hidden);
  AdamState adam;
  TeacherRun run;
  run.params = params;
  double best = 0.0;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    Tape tape;
    const BoundModel bound = bind(tape, params, true);
    const ForwardOutput out = forward(tape, input, bound, cfg.dropout, dropout_rng, Mode::kTrain);
    const Tensor loss = cross_entropy(select_rows(out.logits, s.rows), s.labels);
    tape.backward(loss);
    ModelParams grads = gradients(tape, bound);
    adam_step(params.pointers(), const_view(grads.pointers()), adam, cfg.learning_rate, cfg.weight_decay);

    EpochRecord rec;
    rec.epoch = epoch;
    rec.total = rec.ce = loss.item();
    rec.val_micro_f1 = validation_score(input, g, params);
    if (select(s.history, rec, cfg.selection, best)) run.params = params;
  }
  run.history = std::move(s.history);
  return run;
}

StudentRun distill_student(const HetGraph& g, const ModelParams& teacher, const TrainConfig& cfg) {
  try {
    check_params(g, teacher);
  } catch (const ConfigError& e) {
    throw SchemaMismatchError(std::string("teacher does not match the graph: ") + e.what());
  }
  if (teacher.classifier_weight.rows != cfg.hidden) {
    throw SchemaMismatchError("teacher hidden size " + std::to_string(teacher.classifier_weight.rows) +
                              " differs from the configured " + std::to_string(cfg.hidden));
  }
  Setup s = prepare(g, cfg);
  const GraphInput input(g);
  const TeacherOutputs frozen = teacher_outputs(input, teacher, cfg.distill);

  Rng init_rng = Rng::substream(cfg.seed, "init");
  Rng attention_rng = Rng::substream(cfg.seed, "attention");
  Rng dropout_rng = Rng::substream(cfg.seed, "dropout");
  ModelParams params = cfg.init_student_from_teacher ? teacher : init_model(g, init_rng, cfg.hidden);
  AttentionParams att = init_attention(cfg.hidden, attention_rng);

  std::vector<Matrix*> slots = params.pointers();
  for (Matrix* m : attention_pointers(att)) slots.push_back(m);
  AdamState adam;
  StudentRun run;
  run.params = params;
  run.attention = att;
  double best = 0.0;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    Tape tape;
    const BoundModel bound = bind(tape, params, true);
    const BoundAttention bound_att = bind(tape, att, true);
    const ForwardOutput out = forward(tape, input, bound, cfg.dropout, dropout_rng, Mode::kTrain);
    const HireLoss loss = hire_loss(out, frozen, s.rows, s.labels, bound_att, cfg.distill);
    tape.backward(loss.total);
    ModelParams grads = gradients(tape, bound);
    AttentionParams att_grads = gradients(tape, bound_att);
    std::vector<Matrix*> grad_slots = grads.pointers();
    for (Matrix* m : attention_pointers(att_grads)) grad_slots.push_back(m);
    adam_step(slots, const_view(grad_slots), adam, cfg.learning_rate, cfg.weight_decay);

    EpochRecord rec;
    rec.epoch = epoch;
    rec.total = loss.total.item();
    rec.ce = loss.ce;
    rec.kd = loss.kd;
    rec.rkd = loss.rkd;
    rec.attention = loss.attention;
    rec.val_micro_f1 = validation_score(input, g, params);
    if (select(s.history, rec, cfg.selection, best)) {
      run.params = params;
      run.attention = att;
    }
  }
  run.history = std::move(s.history);
  return run;
}

}  // namespace hire
