"""
Schema of the model configuration JSON file
"""
import attr
import related
from latticeldp.exceptions import ValidationError
from latticeldp.utils import read_json, sha256_file
import logging
logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())


@related.immutable(strict=True)
class ModelConfig:
    """Model configuration

    `kind` selects a registered model (see latticeldp.configurables). Unused
    keys of other kinds may be present but unknown keys are errors.
    """
    kind = related.StringField()
    # lattice scale; Curie-Weiss models may give `lattice_size` instead
    epsilon = related.FloatField(None, required=False)
    horizon = related.FloatField(1.0, required=False)
    phi0 = related.SequenceField(float, required=False)
    model_id = related.StringField(None, required=False)

    # symmetric walk
    dimension = related.IntegerField(1, required=False)

    # Curie-Weiss
    beta = related.FloatField(None, required=False)
    field_offset = related.FloatField(0.0, required=False)
    field_amplitude = related.FloatField(0.0, required=False)
    field_frequency = related.FloatField(1.0, required=False)
    lattice_size = related.IntegerField(None, required=False)
    self_interaction = related.BooleanField(False, required=False)

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ValidationError(f"Model config has to be a JSON object. Got {type(data).__name__}",
                                  code="invalid_config")
        known = {f.name for f in attr.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ValidationError(f"Unknown model config keys: {unknown}. Known keys: {sorted(known)}",
                                  code="unknown_config_key")
        data = dict(data)
        if 'phi0' in data and not isinstance(data['phi0'], (list, tuple)):
            data['phi0'] = [data['phi0']]
        for key in ['epsilon', 'horizon', 'beta', 'field_offset', 'field_amplitude', 'field_frequency']:
            if isinstance(data.get(key), int) and not isinstance(data.get(key), bool):
                data[key] = float(data[key])
        if 'phi0' in data:
            data['phi0'] = [float(x) for x in data['phi0']]
        try:
            return related.to_model(cls, data)
        except (TypeError, ValueError) as e:
            raise ValidationError(f"Invalid model config: {e}", code="invalid_config")

    @classmethod
    def load(cls, path):
        return cls.from_dict(read_json(path))

    def to_dict(self):
        return related.to_dict(self)

    def with_epsilon(self, epsilon):
        """Same model at another lattice scale
        """
        return attr.evolve(self, epsilon=float(epsilon), lattice_size=None)

    def build(self):
        """ChainSpec described by this config
        """
        from latticeldp.configurables import get_model_factory
        spec = get_model_factory(self.kind)(self)
        if self.model_id is not None:
            spec = attr.evolve(spec, model_id=self.model_id)
        return spec


def load_model(path):
    """Load a model config file

    Returns:
      (ModelConfig, ChainSpec, sha256 of the file)
    """
    config = ModelConfig.load(path)
    spec = config.build()
    logger.info(f"Loaded model {spec.model_id} (ε={spec.epsilon}, T={spec.horizon}) from {path}")
    return config, spec, sha256_file(path)
