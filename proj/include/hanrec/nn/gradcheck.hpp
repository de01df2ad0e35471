#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hanrec/nn/network.hpp"
#include "hanrec/rng.hpp"

namespace hanrec {

struct GradCheckEntry {
  std::string tensor;
  int checked = 0;
  double max_rel_err = 0.0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
};

struct GradCheckReport {
  std::vector<GradCheckEntry> entries;
  double max_rel_err = 0.0;

  bool passed(double tolerance) const { return max_rel_err < tolerance; }
};

inline uint64_t gradcheck_stream_tag(const std::string& s) {
  uint64_t hv = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    hv ^= c;
    hv *= 0x100000001B3ULL;
  }
  return hv;
}

// Central finite differences against the analytic gradients. Perturbations
// happen on the stored float32 values; the reference loss is evaluated with
// float64 accumulation, and the effective step is measured from the stored
// values, so the check is limited by truncation error rather than rounding.
// Also checks d(loss)/d(input), which exercises layers without parameters.
inline GradCheckReport gradient_check(Network& net, const Tensor& input,
                                      const std::vector<int>& labels,
                                      double h = 1e-3, int samples_per_tensor = 200,
                                      uint64_t seed = 1) {
  GradCheckReport report;

  (void)net.loss(input, labels);
  Tensor input_grad = net.backward();

  struct Target {
    std::string name;
    float* data;
    const float* analytic;
    size_t count;
  };
  std::vector<Target> targets;
  Tensor input_copy = input;  // perturbed in place below
  targets.push_back({"input", input_copy.data.data(), input_grad.data.data(),
                     input_copy.numel()});
  for (auto& p : net.parameters())
    targets.push_back({p.name, p.value->data.data(), p.grad->data.data(),
                       p.value->numel()});

  for (auto& t : targets) {
    GradCheckEntry entry;
    entry.tensor = t.name;
    Rng rng = Rng::stream(seed, gradcheck_stream_tag(t.name));
    const int n = std::min<size_t>(t.count, static_cast<size_t>(samples_per_tensor));
    for (int s = 0; s < n; ++s) {
      const size_t idx =
          (t.count <= static_cast<size_t>(samples_per_tensor))
              ? static_cast<size_t>(s)
              : static_cast<size_t>(rng.below(t.count));
      const float saved = t.data[idx];
      const float plus = static_cast<float>(saved + h);
      const float minus = static_cast<float>(saved - h);

      t.data[idx] = plus;
      const double lp = net.loss_acc64(input_copy, labels);
      t.data[idx] = minus;
      const double lm = net.loss_acc64(input_copy, labels);
      t.data[idx] = saved;

      const double h_eff =
          (static_cast<double>(plus) - static_cast<double>(minus)) / 2.0;
      const double numeric = (lp - lm) / (2.0 * h_eff);
      const double analytic = t.analytic[idx];
      const double denom =
          std::max({std::abs(analytic), std::abs(numeric), 1e-6});
      const double rel = std::abs(analytic - numeric) / denom;
      entry.checked++;
      if (rel > entry.max_rel_err) {
        entry.max_rel_err = rel;
        entry.worst_analytic = analytic;
        entry.worst_numeric = numeric;
      }
    }
    report.max_rel_err = std::max(report.max_rel_err, entry.max_rel_err);
    report.entries.push_back(entry);
  }
  return report;
}

}  // namespace hanrec
