from rest_framework import serializers

from attack.engines import ENGINES
from attack.plans import AttackPlan, SeverityLevel, StripSpec
from core.exceptions import CorruptFile, InvalidPlan
from core.serializers import PatternField, SeedField, error_message


class SeverityField(serializers.ChoiceField):
    """SeverityLevel as its lower-case name"""

    def __init__(self, **kwargs) -> None:
        super().__init__(choices=[level.value for level in SeverityLevel], **kwargs)

    def to_internal_value(self, data) -> SeverityLevel:
        return SeverityLevel(super().to_internal_value(data))

    def to_representation(self, value) -> str:
        return SeverityLevel(value).value


class StripSerializer(serializers.Serializer):
    """Serializer for one impacted row range"""
    start_row = serializers.IntegerField(min_value=0)
    end_row = serializers.IntegerField(min_value=1)

    def validate(self, attrs: dict) -> dict:
        if attrs['end_row'] <= attrs['start_row']:
            raise serializers.ValidationError('end_row must be greater than start_row')
        return attrs


class PlanSidecarSerializer(serializers.Serializer):
    """Serializer for the plan written next to a single attacked image"""
    source = serializers.CharField()
    output = serializers.CharField()
    severity = SeverityField()
    seed = SeedField()
    strips = StripSerializer(many=True)
    width = serializers.IntegerField(min_value=2)
    height = serializers.IntegerField(min_value=2)
    engine = serializers.ChoiceField(choices=list(ENGINES))
    pattern = PatternField(required=False)


def plan_from_data(data: dict) -> AttackPlan:
    """Rebuild an AttackPlan from validated sidecar or manifest data"""
    strips = tuple(StripSpec(strip['start_row'], strip['end_row']) for strip in data['strips'])
    return AttackPlan(data['severity'], data['seed'], strips, data['height'], data['width'])


def load_plan_sidecar(data: object) -> dict:
    """Validate a parsed sidecar and attach its AttackPlan under 'plan'"""
    serializer = PlanSidecarSerializer(data=data)
    if not serializer.is_valid():
        raise CorruptFile(f'invalid plan sidecar: {error_message(serializer.errors)}')
    validated = dict(serializer.validated_data)
    try:
        validated['plan'] = plan_from_data(validated)
    except InvalidPlan as exc:
        raise CorruptFile(f'invalid plan sidecar: {exc}') from exc
    return validated


def plan_sidecar(plan: AttackPlan, source: str, output: str, engine: str, pattern) -> dict:
    return PlanSidecarSerializer({
        'source': source,
        'output': output,
        'severity': plan.severity,
        'seed': plan.seed,
        'strips': plan.strips,
        'width': plan.image_width,
        'height': plan.image_height,
        'engine': engine,
        'pattern': pattern,
    }).data
