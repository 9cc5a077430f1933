#include "bgwr/dataset.hpp"

#include "bgwr/error.hpp"

namespace bgwr {

void Dataset::validate() const {
  if (y.size() == 0) throw InvalidArgument("empty dataset");
  if (X.rows() != y.size()) throw InvalidArgument("X and y row counts differ");
  if (location.size() != n()) throw InvalidArgument("location column length differs from n");
  if (X.cols() == 0) throw InvalidArgument("dataset has no covariates");
  if (n() < p()) throw InvalidArgument("fewer observations than covariates");
  if (!y.allFinite() || !X.allFinite()) throw InvalidArgument("non-finite value in dataset");
  if (!covariate_names.empty() && covariate_names.size() != p())
    throw InvalidArgument("covariate name count differs from p");
}

void Dataset::validate(const DistanceMatrix& d) const {
  validate();
  for (const auto& loc : location)
    if (!d.find(loc)) throw InvalidArgument("unknown location '" + loc + "'");
}

Dataset with_intercept(Dataset data) {
  Eigen::MatrixXd x(data.X.rows(), data.X.cols() + 1);
  x.col(0).setOnes();
  x.rightCols(data.X.cols()) = data.X;
  data.X = std::move(x);
  if (!data.covariate_names.empty())
    data.covariate_names.insert(data.covariate_names.begin(), "intercept");
  data.intercept_included = true;
  return data;
}

LocationGroups group_locations(const Dataset& data, const DistanceMatrix& d) {
  std::vector<std::size_t> row(data.n());
  std::vector<bool> present(d.size(), false);
  for (std::size_t i = 0; i < data.n(); ++i) {
    row[i] = d.index_of(data.location[i]);
    present[row[i]] = true;
  }

  LocationGroups g;
  std::vector<std::size_t> group_of_row(d.size(), 0);
  for (std::size_t r = 0; r < d.size(); ++r) {
    if (!present[r]) continue;
    group_of_row[r] = g.locations.size();
    g.locations.push_back(d.labels[r]);
    g.label_index.push_back(r);
  }
  g.obs_group.resize(data.n());
  g.members.assign(g.locations.size(), {});
  for (std::size_t i = 0; i < data.n(); ++i) {
    g.obs_group[i] = group_of_row[row[i]];
    g.members[g.obs_group[i]].push_back(i);
  }
  return g;
}

}  // namespace bgwr
