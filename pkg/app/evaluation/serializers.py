from rest_framework import serializers

from evaluation.metrics import MetricKind


class MetricKindField(serializers.Field):
    default_error_messages = {
        'invalid': 'expected one of {choices}, got {value!r}',
    }

    def to_internal_value(self, data) -> MetricKind:
        try:
            return MetricKind.from_name(str(data))
        except ValueError:
            self.fail('invalid', choices=', '.join(kind.value for kind in MetricKind), value=data)

    def to_representation(self, value) -> str:
        return MetricKind(value).value


class MetricRowSerializer(serializers.Serializer):
    """Serializer for one metrics CSV row"""
    group = serializers.CharField()
    subcategory = serializers.CharField()
    model = serializers.CharField()
    metric = MetricKindField()
    no_attack = serializers.FloatField(min_value=0.0, max_value=1.0)
    mild = serializers.FloatField(min_value=0.0, max_value=1.0)
    moderate = serializers.FloatField(min_value=0.0, max_value=1.0)
    severe = serializers.FloatField(min_value=0.0, max_value=1.0)

    def validate_group(self, value: str) -> str:
        return value.lower()

    def validate_subcategory(self, value: str) -> str:
        return ' '.join(value.lower().split())


class TTestResultSerializer(serializers.Serializer):
    """Serializer for ttest.json"""
    variant = serializers.CharField()
    t_statistic = serializers.FloatField(allow_null=True)
    degrees_of_freedom = serializers.FloatField()
    p_value = serializers.FloatField()
    alpha = serializers.FloatField()
    significant = serializers.BooleanField()
    significant_at_5pct = serializers.BooleanField()
    degenerate = serializers.BooleanField()
    mean_a = serializers.FloatField()
    mean_b = serializers.FloatField()
    n_a = serializers.IntegerField()
    n_b = serializers.IntegerField()

    def to_representation(self, instance) -> dict:
        data = super().to_representation(instance)
        if data['t_statistic'] is not None and abs(data['t_statistic']) == float('inf'):
            data['t_statistic'] = None
        return data


class DeltaComparisonSerializer(serializers.Serializer):
    """Flat row of delta_ttest.csv"""
    metric = MetricKindField()
    severity = serializers.CharField(source='severity.value')
    n = serializers.IntegerField(source='result.n_a')
    mean_real = serializers.FloatField(source='result.mean_a')
    mean_simulated = serializers.FloatField(source='result.mean_b')
    t_statistic = serializers.SerializerMethodField()
    degrees_of_freedom = serializers.FloatField(source='result.degrees_of_freedom')
    p_value = serializers.FloatField(source='result.p_value')
    significant = serializers.BooleanField(source='result.significant')

    def get_t_statistic(self, instance):
        return TTestResultSerializer(instance.result).data['t_statistic']
