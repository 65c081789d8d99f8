#pragma once

#include <cmath>
#include <random>

namespace corner {

template <class Rng>
double EntryLaw::draw_unit(Rng& rng) const {
  switch (kind_) {
    case EntryKind::gaussian: {
      std::normal_distribution<double> d(0.0, 1.0);
      return d(rng);
    }
    case EntryKind::rademacher: {
      return (rng() >> 63) ? 1.0 : -1.0;
    }
    case EntryKind::uniform: {
      std::uniform_real_distribution<double> d(-std::sqrt(3.0), std::sqrt(3.0));
      return d(rng);
    }
    case EntryKind::student_t: {
      std::student_t_distribution<double> d(df_);
      return d(rng) * std::sqrt((df_ - 2.0) / df_);
    }
  }
  return 0.0;
}

}  // namespace corner
