#include "smotecls/nn.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace smotecls {

DenseNet DenseNet::make(const std::vector<std::size_t>& widths,
                        const std::vector<Activation>& activations, RngStream& rng) {
  if (widths.size() < 2) throw std::invalid_argument("DenseNet: need at least one layer");
  if (activations.size() != widths.size() - 1)
    throw std::invalid_argument("DenseNet: one activation per layer required");
  DenseNet net;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    DenseLayer layer;
    layer.in = widths[l];
    layer.out = widths[l + 1];
    layer.activation = activations[l];
    layer.weights.resize(layer.in * layer.out);
    layer.bias.assign(layer.out, 0.0);
    const double bound = std::sqrt(6.0 / static_cast<double>(layer.in + layer.out));
    for (auto& w : layer.weights) w = (2.0 * rng.next_double() - 1.0) * bound;
    net.layers.push_back(std::move(layer));
  }
  return net;
}

std::size_t DenseNet::param_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.weights.size() + l.bias.size();
  return n;
}

void DenseNet::get_params(std::span<double> out) const {
  std::size_t k = 0;
  for (const auto& l : layers) {
    std::copy(l.weights.begin(), l.weights.end(), out.begin() + static_cast<std::ptrdiff_t>(k));
    k += l.weights.size();
    std::copy(l.bias.begin(), l.bias.end(), out.begin() + static_cast<std::ptrdiff_t>(k));
    k += l.bias.size();
  }
}

void DenseNet::set_params(std::span<const double> in) {
  std::size_t k = 0;
  for (auto& l : layers) {
    std::copy(in.begin() + static_cast<std::ptrdiff_t>(k),
              in.begin() + static_cast<std::ptrdiff_t>(k + l.weights.size()), l.weights.begin());
    k += l.weights.size();
    std::copy(in.begin() + static_cast<std::ptrdiff_t>(k),
              in.begin() + static_cast<std::ptrdiff_t>(k + l.bias.size()), l.bias.begin());
    k += l.bias.size();
  }
}

namespace {

void apply_activation(Activation act, std::vector<double>& v) {
  switch (act) {
    case Activation::Linear:
      break;
    case Activation::Relu:
      for (auto& x : v) x = std::max(x, 0.0);
      break;
    case Activation::Softmax: {
      const double mx = *std::max_element(v.begin(), v.end());
      double sum = 0.0;
      for (auto& x : v) {
        x = std::exp(x - mx);
        sum += x;
      }
      for (auto& x : v) x /= sum;
      break;
    }
  }
}

}  // namespace

std::vector<double> nn_forward(const DenseNet& net, std::span<const double> input,
                               ForwardCache* cache) {
  if (input.size() != net.input_dim()) throw std::invalid_argument("nn_forward: input width mismatch");
  if (cache != nullptr) {
    cache->post.clear();
    cache->post.emplace_back(input.begin(), input.end());
  }
  std::vector<double> cur(input.begin(), input.end());
  for (const auto& layer : net.layers) {
    std::vector<double> next(layer.out);
    for (std::size_t o = 0; o < layer.out; ++o) {
      double s = layer.bias[o];
      const double* w = layer.weights.data() + o * layer.in;
      for (std::size_t i = 0; i < layer.in; ++i) s += w[i] * cur[i];
      next[o] = s;
    }
    apply_activation(layer.activation, next);
    if (cache != nullptr) cache->post.push_back(next);
    cur = std::move(next);
  }
  return cur;
}

std::vector<double> nn_backward(const DenseNet& net, const ForwardCache& cache,
                                std::span<const double> upstream, std::span<double> param_grads) {
  if (cache.post.size() != net.layers.size() + 1)
    throw std::invalid_argument("nn_backward: missing forward cache");

  std::vector<double> delta(upstream.begin(), upstream.end());
  std::size_t offset = param_grads.size();
  for (std::size_t li = net.layers.size(); li-- > 0;) {
    const auto& layer = net.layers[li];
    const auto& out_act = cache.post[li + 1];
    const auto& in_act = cache.post[li];
    offset -= layer.weights.size() + layer.bias.size();

    // dL/d(pre-activation)
    std::vector<double> dpre(layer.out);
    switch (layer.activation) {
      case Activation::Linear:
        dpre.assign(delta.begin(), delta.end());
        break;
      case Activation::Relu:
        for (std::size_t o = 0; o < layer.out; ++o) dpre[o] = out_act[o] > 0.0 ? delta[o] : 0.0;
        break;
      case Activation::Softmax: {
        double dot = 0.0;
        for (std::size_t o = 0; o < layer.out; ++o) dot += delta[o] * out_act[o];
        for (std::size_t o = 0; o < layer.out; ++o) dpre[o] = out_act[o] * (delta[o] - dot);
        break;
      }
    }

    double* wg = param_grads.data() + offset;
    double* bg = wg + layer.weights.size();
    std::vector<double> dinput(layer.in, 0.0);
    for (std::size_t o = 0; o < layer.out; ++o) {
      const double g = dpre[o];
      bg[o] += g;
      double* wrow = wg + o * layer.in;
      const double* w = layer.weights.data() + o * layer.in;
      for (std::size_t i = 0; i < layer.in; ++i) {
        wrow[i] += g * in_act[i];
        dinput[i] += g * w[i];
      }
    }
    delta = std::move(dinput);
  }
  return delta;
}

namespace {
void write_u64(std::ostream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
std::uint64_t read_u64(std::istream& in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!in) throw std::runtime_error("model file truncated");
  return v;
}
}  // namespace

void DenseNet::save(std::ostream& out) const {
  write_u64(out, layers.size());
  for (const auto& l : layers) {
    write_u64(out, l.in);
    write_u64(out, l.out);
    write_u64(out, static_cast<std::uint64_t>(l.activation));
    out.write(reinterpret_cast<const char*>(l.weights.data()),
              static_cast<std::streamsize>(l.weights.size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(l.bias.data()),
              static_cast<std::streamsize>(l.bias.size() * sizeof(double)));
  }
}

DenseNet DenseNet::load(std::istream& in) {
  DenseNet net;
  const std::uint64_t n = read_u64(in);
  net.layers.resize(n);
  for (auto& l : net.layers) {
    l.in = read_u64(in);
    l.out = read_u64(in);
    l.activation = static_cast<Activation>(read_u64(in));
    l.weights.resize(l.in * l.out);
    l.bias.resize(l.out);
    in.read(reinterpret_cast<char*>(l.weights.data()),
            static_cast<std::streamsize>(l.weights.size() * sizeof(double)));
    in.read(reinterpret_cast<char*>(l.bias.data()),
            static_cast<std::streamsize>(l.bias.size() * sizeof(double)));
    if (!in) throw std::runtime_error("model file truncated");
  }
  return net;
}

Optimizer::Optimizer(OptMethod method, double learning_rate, std::size_t param_count)
    : method_(method), lr_(learning_rate) {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("Optimizer: learning rate must be > 0");
  if (method_ == OptMethod::Adam) {
    m_.assign(param_count, 0.0);
    v_.assign(param_count, 0.0);
  }
}

void Optimizer::step(std::span<double> params, std::span<const double> grads) {
  if (params.size() != grads.size()) throw std::invalid_argument("Optimizer: size mismatch");
  for (std::size_t i = 0; i < grads.size(); ++i)
    if (!std::isfinite(grads[i]))
      throw std::runtime_error("Optimizer: non-finite gradient at parameter " + std::to_string(i) +
                               " (step " + std::to_string(steps_ + 1) + ")");
  ++steps_;
  if (method_ == OptMethod::Sgd) {
    for (std::size_t i = 0; i < params.size(); ++i) params[i] -= lr_ * grads[i];
    return;
  }
  constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  const double t = static_cast<double>(steps_);
  const double bc1 = 1.0 - std::pow(beta1, t);
  const double bc2 = 1.0 - std::pow(beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = beta1 * m_[i] + (1.0 - beta1) * grads[i];
    v_[i] = beta2 * v_[i] + (1.0 - beta2) * grads[i] * grads[i];
    const double mhat = m_[i] / bc1;
    const double vhat = v_[i] / bc2;
    params[i] -= lr_ * mhat / (std::sqrt(vhat) + eps);
  }
}

}  // namespace smotecls
