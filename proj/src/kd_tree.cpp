/*
 * Copyright 2026 The harvest_nav Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "harvest_nav/kd_tree.hpp"

#include <algorithm>
#include <numeric>

namespace harvest {

KdTree3::KdTree3(const std::vector<Eigen::Vector3d>& points) : points_(points) {
  index_.resize(points.size());
  std::iota(index_.begin(), index_.end(), std::size_t{0});
  build(0, index_.size(), 0);
}

void KdTree3::build(std::size_t lo, std::size_t hi, int depth) {
  if (hi - lo <= 1) return;
  const int axis = depth % 3;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::nth_element(index_.begin() + lo, index_.begin() + mid, index_.begin() + hi,
                   [&](std::size_t a, std::size_t b) { return points_[a][axis] < points_[b][axis]; });
  build(lo, mid, depth + 1);
  build(mid + 1, hi, depth + 1);
}

std::vector<double> KdTree3::knn_squared(const Eigen::Vector3d& query, std::size_t k,
                                         std::size_t exclude) const {
  std::vector<double> heap;
  if (k == 0) return heap;
  heap.reserve(k + 1);
  search(0, index_.size(), 0, query, k, exclude, heap);
  std::sort_heap(heap.begin(), heap.end());
  return heap;
}

void KdTree3::search(std::size_t lo, std::size_t hi, int depth, const Eigen::Vector3d& q,
                     std::size_t k, std::size_t exclude, std::vector<double>& heap) const {
  if (lo >= hi) return;
  const int axis = depth % 3;
  const std::size_t mid = lo + (hi - lo) / 2;
  const std::size_t idx = index_[mid];
  if (idx != exclude) {
    const double d2 = (points_[idx] - q).squaredNorm();
    if (heap.size() < k) {
      heap.push_back(d2);
      std::push_heap(heap.begin(), heap.end());
    } else if (d2 < heap.front()) {
      std::pop_heap(heap.begin(), heap.end());
      heap.back() = d2;
      std::push_heap(heap.begin(), heap.end());
    }
  }
  const double diff = q[axis] - points_[idx][axis];
  const bool left_first = diff < 0.0;
  if (left_first) search(lo, mid, depth + 1, q, k, exclude, heap);
  else search(mid + 1, hi, depth + 1, q, k, exclude, heap);
  if (heap.size() < k || diff * diff < heap.front()) {
    if (left_first) search(mid + 1, hi, depth + 1, q, k, exclude, heap);
    else search(lo, mid, depth + 1, q, k, exclude, heap);
  }
}

}  // namespace harvest
