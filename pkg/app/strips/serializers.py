from rest_framework import serializers

from attack.serializers import StripSerializer


class DetectionReportSerializer(serializers.Serializer):
    """Serializer for a strip detection report"""
    detected_strips = StripSerializer(many=True)
    per_row_score = serializers.ListField(child=serializers.FloatField())
    matched = serializers.BooleanField(allow_null=True)
    missed = StripSerializer(many=True)
    spurious = StripSerializer(many=True)


class MismatchSerializer(serializers.Serializer):
    source = serializers.CharField()
    output = serializers.CharField()
    reason = serializers.CharField()
    missed = serializers.ListField(child=serializers.CharField())
    spurious = serializers.ListField(child=serializers.CharField())


class VerificationSummarySerializer(serializers.Serializer):
    """Serializer for the summary `verify` prints"""
    checked = serializers.IntegerField()
    matched = serializers.IntegerField()
    skipped = serializers.IntegerField()
    mismatched = MismatchSerializer(many=True)
