from pathlib import PurePosixPath

from rest_framework import serializers

from attack.engines import ENGINES
from attack.serializers import SeverityField, StripSerializer
from core.serializers import PatternField, SeedField
from dataset.attributes import GROUPS


class AttributeValuesSerializer(serializers.Serializer):
    """Serializer for the attributes object of one labelled image"""
    weather = serializers.CharField(allow_blank=False)
    scene = serializers.CharField(allow_blank=False)
    timeofday = serializers.CharField(allow_blank=False)

    def validate(self, attrs: dict) -> dict:
        return {key: ' '.join(value.lower().split()) for key, value in attrs.items()}


class AttributesRecordSerializer(serializers.Serializer):
    """Serializer for one record of an attributes file; unknown keys are ignored"""
    name = serializers.CharField()
    attributes = AttributeValuesSerializer()

    def validate_name(self, value: str) -> str:
        path = PurePosixPath(value.replace('\\', '/'))
        if path.is_absolute() or '..' in path.parts or not path.parts:
            raise serializers.ValidationError('name must be a relative path without ".."')
        return path.as_posix()


class ManifestRecordSerializer(serializers.Serializer):
    """Serializer for one manifest line"""
    source = serializers.CharField()
    output = serializers.CharField()
    group = serializers.ChoiceField(choices=list(GROUPS))
    subcategory = serializers.CharField()
    severity = SeverityField()
    seed = SeedField()
    strips = StripSerializer(many=True)
    width = serializers.IntegerField(min_value=0)
    height = serializers.IntegerField(min_value=0)
    engine = serializers.ChoiceField(choices=list(ENGINES))
    pattern = PatternField(required=False)
    error = serializers.CharField(required=False, allow_null=True)

    def to_representation(self, instance) -> dict:
        data = super().to_representation(instance)
        if data.get('error') is None:
            data.pop('error', None)
        return data
